"""Heuristic class of every elementary rule (or a chosen few), as CSV."""
import argparse
import csv
import sys

from workbench.ca.classify import ClassifierConfig, classify_heuristic


def main(argv=None):
    ap = argparse.ArgumentParser(description="heuristic classification sweep")
    ap.add_argument("codes", nargs="*", type=int, help="rules to classify (default: all 256)")
    ap.add_argument("--trials", type=int, default=ClassifierConfig.trials)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    cfg = ClassifierConfig(trials=args.trials, seed=args.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["code", "label", "damage_speed", "homogeneous_fraction", "cycled_fraction"])
    for code in args.codes or range(256):
        c = classify_heuristic(code, config=cfg)
        w.writerow([code, c.label, c.damage_speed, c.homogeneous_fraction, c.cycled_fraction])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
