"""Decision table over sampled 2-state machines, with the inverter of a k-step candidate as the last row.

Prints the bounded table (accept or blank), the candidate's filled-in view and
the refutation witness for the candidate.
"""
import argparse

from workbench.diagonal import (TimeoutDecider, TmSubject, build_table, construct_inverter, refute,
                                render_decider_view, sample_machines)


def main(argv=None):
    ap = argparse.ArgumentParser(description="diagonal decision table demo")
    ap.add_argument("--size", type=int, default=8, help="machines sampled from the (2, 2) enumeration")
    ap.add_argument("--bound", type=int, default=100)
    ap.add_argument("-k", type=int, default=10, help="step limit of the candidate decider")
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)

    p = TimeoutDecider(args.k)
    subjects = [TmSubject(m, f"#{i}") for i, m in sample_machines(2, 2, args.size)]
    table = build_table(subjects, args.bound, inverter=construct_inverter(p))
    print(f"bounded behaviour (bound {args.bound}):")
    print(table.render_grid())
    print(f"answers of {p.describe()}, inverter row inverted:")
    print(render_decider_view(table, p))
    w = refute(p)
    print(f"[V,[V]]: candidate says {w.candidate_answer}, V does {w.constructed_action}, observed {w.observed}")
    print(f"misclassified machine halts at step {w.counterexample['halt_step']}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(table.to_csv())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
