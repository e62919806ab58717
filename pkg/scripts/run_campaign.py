"""Run every config in scripts/configs/ and write reports next to them.

Exits non-zero if any campaign has failures.
"""
import argparse
import sys
from pathlib import Path

from parhitchin.campaign import load_config, report_human, run

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("configs", nargs="*", help="config files (default: scripts/configs/*.json)")
    ap.add_argument("--out-dir", default=str(HERE / "reports"))
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    paths = [Path(p) for p in args.configs] or sorted((HERE / "configs").glob("*.json"))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ok = True
    for path in paths:
        rep = run(load_config(path), jobs=args.jobs)
        (out / f"{path.stem}.report.json").write_text(rep.to_json())
        print(f"== {path.name}")
        print(report_human(rep))
        ok &= rep.all_passed
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
