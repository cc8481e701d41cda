#!/usr/bin/env python3
"""Run the default verification suite and print a one-line summary per claim."""

import sys

from holdercone.theorem_suite import default_config, run_suite, write_suite_outputs


def main(out_dir: str = "out/suite") -> int:
    result = run_suite(default_config())
    write_suite_outputs(result, out_dir)
    for r in result.reports:
        flag = " (allow-listed)" if r.allow_listed else ""
        print(
            f"{r.claim_id:20s} {r.family:28s} {r.verdict:15s} "
            f"measured={r.measured_constant:.6g} budget={r.budget:.6g}{flag}"
        )
    print(f"\nreports written to {out_dir}; aggregate: {'pass' if result.passed else 'FAIL'}")
    return 0 if result.passed else 3


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
