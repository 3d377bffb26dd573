#!/usr/bin/env python3
"""Smoke test for the bowtie_py extension module.

Builds nothing itself: expects `cargo build -p bowtie-py` to have produced
target/{debug,release}/libbowtie_py.so. Copies the library next to a temp
module name and exercises the main types and operations.
"""

import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libbowtie_py.so", "bowtie_py.so", "libbowtie_py.dylib")
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build -p bowtie-py")
    tmp = tempfile.mkdtemp(prefix="bowtie_py_")
    shutil.copy2(lib, pathlib.Path(tmp) / "bowtie_py.so")
    sys.path.insert(0, tmp)
    import bowtie_py

    return bowtie_py


def main():
    bt = load_module()

    grid = bt.Grid.default_symmetric()
    pos = bt.Grid.log_spaced(1e-3, 1e3, 128)

    # linear maps solve the equation exactly
    half = bt.Function.linear(0.5)
    r = bt.eq1_residual(half, grid)
    assert r["sup"] == 0.0, r
    print(f"eq1(0.5*id): sup = {r['sup']}")

    # extension of the rational branch solves to rounding, commutes exactly
    f = bt.corollary1_extend(bt.Function.rational_neg())
    r = bt.eq1_residual(f, grid)
    assert r["sup"] <= 1e-9, r
    r1, r2 = bt.lemma_residuals(f, bt.Grid.default_positive())
    assert r1["sup"] == 0.0 and r2["sup"] == 0.0, (r1, r2)
    print(f"corollary-1 extension: eq1 sup = {r['sup']:.3e}, lemma sups = 0")

    # JSON round-trip is bitwise
    back = bt.Function.from_json(f.to_json())
    for x in (-7.0, -0.3, 0.9, 512.0):
        assert back.evaluate(x) == f.evaluate(x), x
    print("function JSON round-trip: bitwise")

    # dualities stay solutions
    two = bt.homogeneous_solution(0.3, 0.6)
    for dual in (bt.displacement_dual(two), bt.rotate_dual(two)):
        assert bt.eq1_residual(dual, grid)["sup"] <= 1e-9
    print("dualities: both duals solve")

    # Abel solve / branch build / periodic extraction round-trip
    c = bt.solve_abel(bt.Function.linear(0.5), profile="log")
    assert c.abel_residual(pos)["sup"] <= 1e-9
    p = bt.Periodic.trig(1.0, 1.0, [0.1], [0.3])
    h = bt.build_branch(c, p)
    q, defect = bt.extract_periodic(h, c, samples=256)
    assert defect["sup"] <= 1e-8, defect
    worst = max(abs(q.evaluate(j / 256) - p.evaluate(j / 256)) for j in range(256))
    assert worst <= 1e-8, worst
    rec = bt.reconstruct_g(c)
    assert abs(rec.evaluate(8.0) - 4.0) <= 1e-9
    print(f"abel round-trip: periodicity defect = {defect['sup']:.3e}, P error = {worst:.3e}")

    # theorem-2 constant displacement reduces to a homogeneous branch
    f2, second = bt.theorem2_construct(
        bt.Function.linear(0.3).restrict_neg(), bt.Periodic.constant(1.0, 0.7), pos
    )
    b = 0.7**0.7
    assert abs(f2.evaluate(2.0) - 2.0 * b) <= 1e-12
    assert second["sup"] <= 1e-9
    print(f"theorem-2: f(2) = {f2.evaluate(2.0):.12f} (expect {2 * b:.12f})")

    # eq13 separates homogeneous from perturbed maps
    lin = bt.Function.linear(0.4).restrict_pos()
    pert = bt.Function.sin_log_slope(0.5, 0.1).restrict_pos()
    assert bt.eq13_residual(lin, pos)["sup"] <= 1e-9
    assert bt.eq13_residual(pert, pos)["sup"] > 1e-3
    assert bt.proposition5_check(lin, pos)["common_abel_plausible"]
    assert not bt.proposition5_check(pert, pos)["common_abel_plausible"]
    print("eq13 / prop5: verdicts separate homogeneous from perturbed")

    # conditional Cauchy equation: dyadic linear F is exactly additive
    s = bt.sablik_residual(bt.Function.linear(0.25), bt.Function.linear(0.3).restrict_pos(), pos)
    assert s["sup"] == 0.0, s
    print("sablik: dyadic linear residual exactly 0")

    # perturbation scan grows with amplitude
    scan = bt.perturbation_scan(0.5, [0.0, 1e-3, 1e-2])
    assert scan[0][1] <= 1e-9 and scan[1][1] < scan[2][1], scan
    print(f"scan: {scan}")

    print("smoke test passed")


if __name__ == "__main__":
    main()
