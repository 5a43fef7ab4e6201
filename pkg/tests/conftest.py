from fractions import Fraction as F

import numpy as np

from qcopula import circuits as C
from qcopula.copula import (
    ArchimedeanParams,
    FabricParams,
    Mb11Spec,
    SetPartition,
    discretize_cdf,
    mb11_weights_from_taildep,
    mixture_grid,
)

TAIL_SPEC = mb11_weights_from_taildep(F(1, 2), F(1, 4), F(1, 8), F(1, 16))
HALF_SPEC = Mb11Spec.from_codes({"111": F(1, 2), "112": F(1, 2)})
SIGNED_SPEC = Mb11Spec.from_codes({"1-11": F(1, 2), "12-1": F(1, 4), "123": F(1, 4)})


def builder_catalogue(k: int) -> dict:
    """One circuit per builder (and a few parameter variants) at resolution ``k``."""
    out = {
        "m2": C.build_fundamental("M2", k),
        "w2": C.build_fundamental("W2", k),
        "pi3": C.build_fundamental("Pi", k, 3),
        "canonical-1-12": C.build_canonical(SetPartition.parse("1-12"), k),
        "b11-pure": C.build_b11_pure(F(1, 2), k),
        "b11-pure-third": C.build_b11_pure(F(1, 3), k),
        "b11-mixed": C.build_b11_mixed(F(1, 2), k),
        "mb11-mixed": C.build_mb11_mixed(TAIL_SPEC, k),
        "mb11-mixed-half": C.build_mb11_mixed(HALF_SPEC, k),
        "mb11-pure3": C.build_mb11_pure3(TAIL_SPEC, k),
        "frechet3-pure": C.build_frechet3_pure(SIGNED_SPEC, k),
        "mirror-pure4": C.build_mirror_pure(Mb11Spec.from_codes({"1111": F(1, 2), "1212": F(1, 2)}), k),
        "benchmark4": C.build_benchmark4(k),
        "generic-gumbel": C.build_generic(discretize_cdf(ArchimedeanParams("gumbel", 2.0).cdf, k)),
        "generic-frechet": C.build_generic(mixture_grid(Mb11Spec.frechet(F(1, 2), F(1, 4)), k)),
        "fabric": C.build_fabric(FabricParams(np.full((2, k), 0.7))),
    }
    if k == 1:
        out["mn-pin"] = C.build_mn_pin(F(1, 2), 3)
        out["b11-negative"] = C.build_b11_pure(F(-1, 2), 1)
    return out


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
