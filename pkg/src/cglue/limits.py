"""Cusp limits: the triply punctured sphere data and convergence checks.

As all three boundary half-lengths of a pants shrink to 0, the group tends
to the standard triply punctured sphere group generated by [[1, 2], [0, 1]]
and [[1, 0], [2, 1]]; the chart maps tend to fixed integer matrices; and
with the coupled gluing parameter ``bold_mu = i pi - mu c`` the gate tends
to the cusped gate built from J = [[-i, 0], [0, i]] and T = [[1, mu], [0, 1]].
The hypercycle crossing of the imaginary axis tends to the horocycle height
Im(mu) / 2.

``limit_check`` measures all of these along a decreasing sequence of
lengths and reports the deviations, whether they decrease monotonically,
and an estimated decay order (least-squares slope in log-log, informational
only).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .moebius import INF, Mat2C, chordal
from .pants import (
    axis_inf_feet,
    axis_one_feet,
    axis_zero_feet,
    generator_inf,
    generator_zero,
    hypercycle_inf,
    omega,
)
from .surface import j_map, t_map

PRECISION_FLOOR = 1e-6

QUANTITIES = (
    "A_inf",
    "A_0",
    "Omega_0",
    "Omega_1",
    "gate",
    "hypercycle",
    "axis_inf",
    "axis_0",
    "axis_1",
)


class NumericFloorError(ValueError):
    """Input sits below the supported numerical precision floor."""


@dataclass(frozen=True)
class CuspedGluingData:
    """The cusped counterparts of the pants and gluing matrices."""

    mu: complex
    gen_a: Mat2C
    gen_b: Mat2C
    j: Mat2C
    t: Mat2C
    omega_0: Mat2C
    omega_1: Mat2C
    omega_inf: Mat2C
    horocycle_height: float

    def gate(self) -> Mat2C:
        return self.j.inverse() @ self.t.inverse()


def cusped_data(mu: complex) -> CuspedGluingData:
    """Gluing data for the triply punctured sphere with parameter mu (Im > 0)."""
    mu = complex(mu)
    if not mu.imag > 0.0:
        raise ValueError(f"cusped gluing needs Im(mu) > 0, got {mu!r}")
    return CuspedGluingData(
        mu=mu,
        gen_a=Mat2C(1.0, 2.0, 0.0, 1.0),
        gen_b=Mat2C(1.0, 0.0, 2.0, 1.0),
        j=Mat2C(-1j, 0.0, 0.0, 1j),
        t=Mat2C(1.0, mu, 0.0, 1.0),
        omega_0=Mat2C(1.0, -1.0, 1.0, 0.0),
        omega_1=Mat2C(0.0, -1.0, 1.0, -1.0),
        omega_inf=Mat2C.identity(),
        horocycle_height=mu.imag / 2.0,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    mu: complex
    cs: tuple[float, ...]
    deviations: dict[str, tuple[float, ...]]
    monotone: dict[str, bool]
    decay_order: dict[str, float]
    controlled: dict[str, bool]

    def format_table(self) -> str:
        head = "quantity".ljust(12) + "".join(f"c={c:<12.6g}" for c in self.cs)
        lines = [head, "-" * len(head)]
        for name in QUANTITIES:
            devs = self.deviations[name]
            row = name.ljust(12) + "".join(f"{d:<14.4e}" for d in devs)
            row += f"  order~{self.decay_order[name]:.2f}"
            row += "  monotone" if self.monotone[name] else "  NOT monotone"
            lines.append(row)
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "mu": [self.mu.real, self.mu.imag],
                "cs": list(self.cs),
                "deviations": {k: list(v) for k, v in self.deviations.items()},
                "monotone": self.monotone,
                "decay_order": self.decay_order,
                "controlled": self.controlled,
            },
            indent=2,
        )


def limit_check(mu: complex, cs: tuple[float, ...] | list[float]) -> ConvergenceReport:
    """Measure convergence to the cusped data along decreasing lengths.

    ``mu`` needs positive imaginary part; ``cs`` must be strictly decreasing
    with at least two entries, all above the 1e-6 precision floor, and small
    enough that the coupled parameter ``i pi - mu c`` keeps its imaginary
    part in [0, pi).
    """
    mu = complex(mu)
    cusp = cusped_data(mu)
    cs = tuple(float(c) for c in cs)
    if len(cs) < 2:
        raise ValueError("need at least two lengths to measure a trend")
    if any(c2 >= c1 for c1, c2 in zip(cs, cs[1:])):
        raise ValueError(f"lengths must be strictly decreasing, got {cs}")
    if cs[-1] <= PRECISION_FLOOR:
        raise NumericFloorError(
            f"smallest length {cs[-1]} is at or below the precision floor {PRECISION_FLOOR}"
        )
    if cs[0] * mu.imag > math.pi:
        raise ValueError(
            f"c * Im(mu) = {cs[0] * mu.imag:.4g} exceeds pi; the coupled gluing "
            "parameter leaves its range"
        )

    cusp_gate = cusp.gate()
    devs: dict[str, list[float]] = {name: [] for name in QUANTITIES}
    for c in cs:
        bold_mu = 1j * math.pi - mu * c
        devs["A_inf"].append(generator_inf(c).psl_distance(cusp.gen_a))
        devs["A_0"].append(generator_zero(c, c, c).psl_distance(Mat2C(1.0, 0.0, -2.0, 1.0)))
        devs["Omega_0"].append(omega(0, (c, c, c)).psl_distance(cusp.omega_0))
        devs["Omega_1"].append(omega(1, (c, c, c)).psl_distance(cusp.omega_1))
        gate = j_map(c).inverse() @ t_map(c, bold_mu).inverse()
        devs["gate"].append(gate.psl_distance(cusp_gate))
        h = hypercycle_inf(c, bold_mu)
        devs["hypercycle"].append(abs(h.iaxis_point - 1j * cusp.horocycle_height))
        devs["axis_inf"].append(max(chordal(f, INF) for f in axis_inf_feet(c)))
        devs["axis_0"].append(max(chordal(f, 0.0) for f in axis_zero_feet(c, c, c)))
        devs["axis_1"].append(max(chordal(f, 1.0) for f in axis_one_feet(c, c, c)))

    log_cs = np.log(np.asarray(cs))
    monotone: dict[str, bool] = {}
    order: dict[str, float] = {}
    controlled: dict[str, bool] = {}
    for name, seq in devs.items():
        monotone[name] = all(b <= a for a, b in zip(seq, seq[1:]))
        floored = np.maximum(np.asarray(seq), 1e-300)
        order[name] = float(np.polyfit(log_cs, np.log(floored), 1)[0])
        controlled[name] = seq[-1] <= 10.0 * seq[0] * (cs[-1] / cs[0])
    return ConvergenceReport(
        mu=mu,
        cs=cs,
        deviations={k: tuple(v) for k, v in devs.items()},
        monotone=monotone,
        decay_order=order,
        controlled=controlled,
    )
