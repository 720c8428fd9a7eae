#!/usr/bin/env python3
"""Smoke test for the lane_emden_py extension module.

Builds are produced by `cargo build -p lane-emden-py` (add `--release` for
the release profile). The script locates the compiled cdylib under
target/, copies it next to a temporary import root under the importable
name, and exercises the main types and operations.

Run from the repository root:

    cargo build -p lane-emden-py
    python3 python/smoke_test.py
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import sysconfig
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib() -> pathlib.Path:
    names = ["liblane_emden_py.so", "lane_emden_py.dll", "liblane_emden_py.dylib"]
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in names
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "compiled extension not found; run `cargo build -p lane-emden-py` first"
    )


def import_module(tmp: pathlib.Path):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = tmp / f"lane_emden_py{suffix}"
    shutil.copy2(locate_cdylib(), target)
    spec = importlib.util.spec_from_file_location("lane_emden_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def check(label: str, ok: bool):
    print(f"{label:<44} {'ok' if ok else 'FAIL'}")
    if not ok:
        sys.exit(1)


def main():
    with tempfile.TemporaryDirectory() as tmp:
        le = import_module(pathlib.Path(tmp))

        check("sobolev exponent", le.sobolev_exponent(3.0, 1.0) == 5.0)
        root = le.jl_exponent_root(11.0, 1.0)
        closed = le.jl_exponent_closed_form(11.0, 1.0)
        check("critical exponent root vs closed form", abs(root - closed) < 1e-9)
        check("root below 11 dimensions is inf", math.isinf(le.jl_exponent_root(10.0, 1.0)))

        lam = le.power_law_multiplier(9.0, 1.0, 3.0)
        check("multiplier product form", abs(lam - 12.0) < 1e-12)
        hardy = le.hardy_constant(13.0, 2.0)
        check("fourth-order Hardy constant", abs(hardy - 13**2 * 9**2 / 16) < 1e-9)
        omega = le.sphere_area(3.0)
        check("sphere area", abs(omega - 4 * math.pi) < 1e-12)

        params = le.Params(5.0, 1.0, 3.0, m=2)
        tag, _margin = params.classify()
        check("regime classification", tag == "supercritical-trivial")
        stable, margin = params.singular_stable()
        check("singular solution unstable at (5,1,3)", not stable and margin < 0)

        d = 1 / math.sqrt(2)
        sing = le.make_singular(params, [d, d])
        check("singular amplitude", abs(sing.amplitude - math.sqrt(2)) < 1e-12)
        check("pointwise residual", max(abs(v) for v in sing.residual(2.0)) < 1e-10)
        check("growth exponent", abs(sing.growth_exponent("l2") - 3.0) < 1e-12)

        bubble = le.Params(3.0, 1.0, 5.0)
        sol = le.solve_radial(bubble, [3.0**0.25], 10.0)
        got = sol.sample(2.0)["u"][0]
        expect = 3.0**0.25 / math.sqrt(5.0)
        check("explicit profile reproduced", abs(got - expect) < 1e-6)

        e1 = sol.energy_e1(2.0)
        fd, rhs, res = sol.energy_e1_identity(2.0, 1e-3)
        check("energy derivative identity", res < 1e-5 * max(1.0, abs(rhs)))
        scan = sol.energy_scan([0.5, 1.0, 2.0, 4.0])
        check("energy scan monotone", e1 > 0 and scan["violations"] == [])
        check("scale invariance", sol.scale_invariance(1.5, 2.0) < 1e-8)

        q, alpha, beta = le.angular_coefficients(13.0, 2.0)
        check("angular coefficients", (q, alpha, beta) == (4.0, 58.0, 840.0))
        c1, c2, c3 = le.stability_triple(13.0, 2.0)
        check("stability triple", c1 > 0 and c2 > 0 and c3 > 0)
        qv, _, _ = le.singular_instability_probe(11.0, 1.0, 6.0, 1e-3)
        check("instability probe sign", qv < 0)

        k0 = le.kernel_k(3.0, 0.5, 0.0, 0.0)
        check("kernel spot value", abs(k0 - math.pi / 4) < 1e-10)
        gap = le.kernel_monotonicity_gap(4.0, 0.5, 3.0, 0.0)
        check("kernel monotonicity gap", gap < 0)

        print("smoke test passed")


if __name__ == "__main__":
    main()
