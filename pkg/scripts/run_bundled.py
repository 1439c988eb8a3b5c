"""Run every bundled CLI job in-process.

    python3 scripts/run_bundled.py                 # one line per job: status, sha256 of the report
    python3 scripts/run_bundled.py --out DIR       # also write each report to DIR
    python3 scripts/run_bundled.py --headline --out tests/golden   # refresh the golden files
"""

import argparse
import hashlib
import os
import sys

from dgtannaka.cli import COMMANDS, build_parser, run, JobSpec

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PRESENTATIONS = os.path.join(ROOT, "presentations")

# headline jobs with their own parameters, pinned by golden files
HEADLINE = [
    ("tannaka-dual", "dual_numbers", ["--max-level", "8", "--normalised"]),
    ("counit-check", "dual_numbers", ["--max-level", "3", "--depth", "2", "--window", "-2", "2"]),
    ("counit-check", "a2_quiver", ["--depth", "2", "--window", "-2", "2"]),
    ("koszul-check", "one_arrow", ["--max-level", "3", "--window", "0", "3"]),
    ("koszul-check", "one_cogenerator", ["--max-level", "3"]),
    ("koszul-check", "a2_quiver", ["--max-level", "3"]),
    ("bialgebra", "dual_numbers", ["--max-level", "5"]),
    ("antipode-check", "dual_numbers", ["--max-level", "5"]),
    ("hochschild", "truncated_poly", ["--max-level", "5", "--normalised"]),
    ("validate", "corrupted", []),
    ("cohomology", "z2_group", ["--max-level", "3"]),
]


def jobs(presentations=PRESENTATIONS):
    names = sorted(f[:-5] for f in os.listdir(presentations) if f.endswith(".json"))
    out = []
    for cmd in COMMANDS:
        for nm in names:
            out.append((cmd, nm, ["--max-level", "3"]))
    return out + HEADLINE


def job_id(cmd, name, extra) -> str:
    return "__".join([cmd, name] + [a.replace("-", "m") for a in extra if not a.startswith("--")])


def run_job(cmd, name, extra, presentations=PRESENTATIONS):
    a = build_parser().parse_args([cmd, os.path.join(presentations, name + ".json")] + extra)
    job = JobSpec(a.command, list(a.inputs), a.max_level, tuple(a.window) if a.window else None, a.depth,
                  a.normalised, a.field, a.format, a.out)
    return run(job)


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("--out")
    p.add_argument("--presentations", default=PRESENTATIONS)
    p.add_argument("--headline", action="store_true", help="only the jobs pinned by golden files")
    a = p.parse_args(argv)
    if a.out:
        os.makedirs(a.out, exist_ok=True)
    for cmd, name, extra in (HEADLINE if a.headline else jobs(a.presentations)):
        status, text = run_job(cmd, name, extra, a.presentations)
        jid = job_id(cmd, name, extra)
        print(jid, status, hashlib.sha256(text.encode()).hexdigest())
        if a.out and status != 2:
            with open(os.path.join(a.out, jid + ".json"), "w") as fh:
                fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
