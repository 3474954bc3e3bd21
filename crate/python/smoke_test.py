#!/usr/bin/env python3
"""Smoke test for the ctxlab_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/,
copies it to an importable name, and exercises the main operations.
Run `cargo build -p ctxlab-py` first (or `--release`).
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = []
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libctxlab_py.so"
        if lib.exists():
            candidates.append(lib)
    if not candidates:
        sys.exit("libctxlab_py.so not found; run `cargo build -p ctxlab-py` first")
    return max(candidates, key=lambda p: p.stat().st_mtime)


def check(label: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}")
    if not ok:
        sys.exit(1)


def main() -> None:
    workdir = Path(tempfile.mkdtemp(prefix="ctxlab_py_"))
    shutil.copy(locate_cdylib(), workdir / "ctxlab_py.so")
    sys.path.insert(0, str(workdir))
    import ctxlab_py

    names = ctxlab_py.builtin_names()
    check("builtin catalog lists eight scenarios", len(names) == 8)

    kcbs = ctxlab_py.Scenario.builtin("kcbs")
    check("pentagon has ten atoms and five contexts",
          kcbs.n_atoms() == 10 and len(kcbs.contexts()) == 5)

    chsh = ctxlab_py.Scenario.builtin("chsh")
    assignments, truncated = chsh.enumerate_01()
    check("box scenario has sixteen deterministic states",
          len(assignments) == 16 and not truncated)

    singlet = chsh.state("singlet")
    value = chsh.eval_inequality("chsh", singlet)
    check("singlet reaches 2 + sqrt(2)",
          abs(value - (2.0 + math.sqrt(2.0))) < 1e-9)
    check("classical bound is 3", chsh.nc_bound("chsh") == 3.0)

    ceg18 = ctxlab_py.Scenario.builtin("ceg18")
    check("the 18-ray set admits no assignment",
          ceg18.is_ks_contextual() and ceg18.ks_assignment() is None)

    pr_box = chsh.fraction(chsh.state("pr_box"))
    check("the PR box is fully contextual",
          abs(pr_box["contextual_fraction"] - 1.0) < 1e-7)

    report = chsh.classify(singlet)
    check("the singlet is contextual but not logically so",
          report["contextual"] and not report["logically_contextual"])

    back = ctxlab_py.Scenario.from_json(kcbs.to_json())
    check("JSON round trip preserves the structure",
          back.is_isomorphic(kcbs) and back.labels() == kcbs.labels())

    third = 1.0 / 3.0
    rows = [[[third if i == j else 0.0, 0.0] for j in range(3)] for i in range(3)]
    mixed = kcbs.state_from_density(rows)
    check("the maximally mixed state is noncontextual on the pentagon",
          kcbs.fraction(mixed)["w_nc"] > 1.0 - 1e-7)

    custom = kcbs.state_from_probs({f"P{i}": 0.5 for i in range(5)})
    check("probability mappings validate and densify",
          len(custom) == 10 and custom[kcbs.labels().index("P34")] == 0.0)
    try:
        kcbs.state_from_probs({"P0": 0.7})
        check("invalid states are rejected", False)
    except ValueError:
        check("invalid states are rejected", True)

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
