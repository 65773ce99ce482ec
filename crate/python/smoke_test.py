#!/usr/bin/env python3
"""Smoke test for the cheb_py extension module.

Build the shared object first (either profile works):

    cargo build -p cheb-py            # or --release

The script locates target/{release,debug}/libcheb_py.so, stages it
under the importable name cheb_py.so, and checks a handful of exact
values end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def stage_module() -> None:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libcheb_py.so",
        root / "target" / "debug" / "libcheb_py.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("libcheb_py.so not found; run `cargo build -p cheb-py` first")
    stage = Path(tempfile.mkdtemp(prefix="cheb_py_"))
    shutil.copy2(built, stage / "cheb_py.so")
    sys.path.insert(0, str(stage))


def close(got: float, want: float, tol: float = 1e-9) -> bool:
    return abs(got - want) <= tol


def main() -> None:
    stage_module()
    import cheb_py

    # Functional anchors: T(x, x) = 1/12 and T(x², x²) = 4/45 on [0,1].
    x = cheb_py.Function("x", 0.0, 1.0)
    x2 = cheb_py.Function("x^2", 0.0, 1.0)
    t = cheb_py.chebyshev(x, x, 0.0, 1.0)
    assert close(t.value, 1.0 / 12.0), t
    t = cheb_py.chebyshev(x2, x2, 0.0, 1.0)
    assert close(t.value, 4.0 / 45.0), t

    # Evaluation, derivative, and norms.
    assert close(x2(0.5), 0.25, 1e-15)
    assert close(x2.derivative()(0.5), 1.0, 1e-12)
    assert close(cheb_py.lp_norm(x, 0.0, 1.0, 2.0), 1.0 / math.sqrt(3.0))
    assert close(cheb_py.sup_norm(x2, 0.0, 1.0), 1.0, 1e-9)
    tv, _exact = cheb_py.total_variation(x, 0.0, 1.0)
    assert close(tv, 1.0), tv

    # Identity route agrees with the definition for a step integrator.
    step = cheb_py.Function("sign(x - 0.5)", 0.0, 1.0)
    via = cheb_py.chebyshev_identity(step, x, 0.0, 1.0, route="dragomir")
    assert close(via.value, 0.25, 1e-10), via

    # Two-interval difference |T_0^0.7 − T_0.2^1| of (x, x) = 0.0125.
    d = cheb_py.functional_difference(x, x, 0.0, 0.2, 0.7, 1.0)
    assert close(d.diff_abs, 0.0125, 1e-9), d
    assert close(d.left.value, 0.7**2 / 12.0), d.left

    # Pre-Grüss chain on the diagonal: level1 = level2 = T(x, x).
    l1, l2, _ = cheb_py.pre_gruss(x, x, 0.0, 1.0)
    assert close(l1, 1.0 / 12.0) and close(l2, 1.0 / 12.0), (l1, l2)

    # Beta anchors.
    assert close(cheb_py.beta(1.0, 1.0), 1.0, 1e-12)
    assert close(cheb_py.beta(2.0, 2.0), 1.0 / 6.0, 1e-12)

    # A closed-form bound: the product bound on [0,1] with unit
    # derivative norms is (b−a)²/12, attained by f = g = x.
    bound = cheb_py.evaluate_bound(
        "thm1/chebyshev", 0.0, 0.5, 0.5, 1.0, f_inf=1.0, g_inf=1.0
    )
    assert bound.preconditions_ok and close(bound.rhs, 1.0 / 12.0), bound
    assert "thm1/chebyshev" in cheb_py.THEOREM_IDS

    # A small verification sweep certifies with zero violations.
    records, certified, violations = cheb_py.sweep_counts(
        seed=42, entries=12, cfgs_per_entry=4
    )
    assert records > 0 and certified > 0 and violations == 0, (
        records,
        certified,
        violations,
    )

    print(f"smoke test passed: {records} sweep records, 0 violations")


if __name__ == "__main__":
    main()
