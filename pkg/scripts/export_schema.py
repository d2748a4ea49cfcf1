"""Regenerate docs/config_schema.json from the in-code schema."""
import json
from pathlib import Path

from dyonlab.config import CONFIG_SCHEMA

OUT = Path(__file__).resolve().parents[1] / "docs" / "config_schema.json"


def render() -> str:
    return json.dumps(CONFIG_SCHEMA, indent=2, sort_keys=True) + "\n"


if __name__ == "__main__":
    OUT.write_text(render())
    print(f"wrote {OUT}")
