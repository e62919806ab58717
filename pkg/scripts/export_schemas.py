"""Write the config and report JSON schemas to docs/."""
import argparse
import json
from pathlib import Path

from parhitchin.campaign import CONFIG_SCHEMA, REPORT_SCHEMA


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parent.parent / "docs"))
    args = ap.parse_args()
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, schema in [("config.schema.json", CONFIG_SCHEMA), ("report.schema.json", REPORT_SCHEMA)]:
        (out / name).write_text(json.dumps(schema, indent=2) + "\n")
        print(out / name)


if __name__ == "__main__":
    main()
