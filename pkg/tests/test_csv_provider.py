from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from engine.data.spec import CsvDatasetSpec, SyntheticDatasetSpec
from engine.errors import ParseError, SchemaMismatchError
from infra.data.csv_provider import CsvDatasetProvider, load_csv, write_csv

TRAIN = """client,f0,f1,label
a,0.1,0.2,0
a,0.3,0.4,1
b,0.5,0.6,1
a,0.7,0.8,2
b,0.9,1.0,0
b,1.1,1.2,2
"""
TEST = """f0,f1,label
0.0,0.0,0
1.0,1.0,2
"""


def _files(tmp_path: Path, train: str = TRAIN, test: str = TEST) -> tuple[Path, Path]:
    train_path, test_path = tmp_path / "train.csv", tmp_path / "test.csv"
    train_path.write_text(train, encoding="utf-8")
    test_path.write_text(test, encoding="utf-8")
    return train_path, test_path


def test_rows_are_grouped_by_client(tmp_path):
    d = load_csv(*_files(tmp_path))
    assert d.k_clients == 2
    assert d.shard_sizes() == (3, 3)
    assert [s.name for s in d.shards] == ["a", "b"]
    assert d.input_dim == 2
    assert d.num_classes == 3
    np.testing.assert_array_equal(d.shards[0].labels, [0, 1, 2])
    assert d.test_set.size == 2


def test_numeric_client_keys_sort_numerically(tmp_path):
    train = "client,f0,label\n10,1.0,0\n2,2.0,1\n2,3.0,0\n"
    d = load_csv(*_files(tmp_path, train, "f0,label\n1.0,0\n"))
    assert [s.name for s in d.shards] == ["2", "10"]
    assert d.shard_sizes() == (2, 1)


def test_missing_label_column(tmp_path):
    with pytest.raises(SchemaMismatchError, match="label"):
        load_csv(*_files(tmp_path, "client,f0\na,1.0\n"))


def test_feature_columns_must_match(tmp_path):
    with pytest.raises(SchemaMismatchError):
        load_csv(*_files(tmp_path, TRAIN, "f0,f2,label\n0,0,0\n"))


def test_non_numeric_cell_reports_its_location(tmp_path):
    train = TRAIN.replace("0.9,1.0", "0.9,oops")
    with pytest.raises(ParseError) as info:
        load_csv(*_files(tmp_path, train))
    message = str(info.value)
    assert "row 6" in message
    assert "'f1'" in message
    assert "oops" in message


def test_fractional_label_is_rejected(tmp_path):
    with pytest.raises(ParseError, match="label"):
        load_csv(*_files(tmp_path, "client,f0,label\na,1.0,0.5\n"))


def test_unreadable_file(tmp_path):
    with pytest.raises(ParseError):
        load_csv(tmp_path / "missing.csv", tmp_path / "missing_test.csv")


def test_written_partition_reloads_with_same_shards(tmp_path, tiny_dataset):
    train_path, test_path = write_csv(tiny_dataset, tmp_path / "out")
    reloaded = load_csv(train_path, test_path)
    assert reloaded.shard_sizes() == tiny_dataset.shard_sizes()
    assert reloaded.test_set.size == tiny_dataset.test_set.size
    for original, again in zip(tiny_dataset.shards, reloaded.shards):
        np.testing.assert_array_equal(original.labels, again.labels)
        np.testing.assert_allclose(original.features, again.features)


def test_write_is_byte_stable(tmp_path, tiny_dataset):
    first = write_csv(tiny_dataset, tmp_path / "one")
    second = write_csv(tiny_dataset, tmp_path / "two")
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()


def test_provider_dispatches_on_source(tmp_path):
    provider = CsvDatasetProvider()
    train_path, test_path = _files(tmp_path)
    assert provider.load(CsvDatasetSpec(train_path=train_path, test_path=test_path)).k_clients == 2
    synthetic = SyntheticDatasetSpec(k_clients=3, num_classes=2, input_dim=2, mean_shard_size=4, test_size=10)
    assert provider.load(synthetic).k_clients == 3
