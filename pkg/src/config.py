from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = BASE_DIR / "data"
DEFAULTS_PATH = DATA_DIR / "defaults.yaml"

# Environment overrides are read with this prefix, e.g. HBK_P=3
ENV_PREFIX = "HBK_"
