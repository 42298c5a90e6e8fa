import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

_PROJECT_ROOT = Path(__file__).parent.parent

# 로컬 .env가 있으면 로드한다. 이미 설정된 환경변수는 덮어쓰지 않는다.
load_dotenv(_PROJECT_ROOT / ".env", override=False)


@dataclass(frozen=True)
class Settings:
    output_dir: Path | None   # FEDTUNE_OUTPUT_DIR. --out보다 우선순위가 낮고 설정 파일보다 높다


def _get_path(name: str) -> Path | None:
    value = os.getenv(name)
    if not value or not value.strip():
        return None
    return Path(value.strip())


def get_settings() -> Settings:
    return Settings(output_dir=_get_path("FEDTUNE_OUTPUT_DIR"))
