"""Explicit collective attacks used as ground truth for the bound machinery.

Eve's ancilla, unitary and flag measurement collapse into one outcome-1
operator K on the joint two-qubit input: sqrt(p_ij)|G_ij> = K|phi_i>|phi'_j>.
Every quantity the analysis bounds can then be computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .coefficients import is_feasible, side_row_spec
from .core import (
    A_MAX,
    PAIRS,
    AnalysisSettings,
    CoefficientPoint,
    InconsistentTableError,
    Mode,
    ProbabilityTable,
    Side,
    validate_table,
)
from .keyrate import analyze

_DEGENERATE = 1e-14


@dataclass(frozen=True)
class AttackConfig:
    """Sampling knobs for :func:`random_attack`.

    ``ideal_mix`` blends the random operator with the ideal singlet projector
    (weight in [0, 1]); 0 reproduces plain Gaussian contractions. With
    ``states="ideal"`` the states are the ideal ones perturbed by ``jitter``
    (in amplitude and phase), which yields tight, informative tables.
    """

    name: str = "default"
    max_overlap: float = 0.5
    scale_max: float = 2.0
    ideal_mix: float = 0.0
    theta: float = 0.0
    states: str = "random"
    jitter: float = 0.05


IDEAL = AttackConfig(name="ideal")


@dataclass(frozen=True)
class AttackInstance:
    alice_states: np.ndarray  # (4, 2) complex rows |phi_i>
    bob_states: np.ndarray  # (4, 2) complex rows |phi'_j>
    kraus: np.ndarray  # (4, 4) complex, acts on |phi_i> (x) |phi'_j>
    alice_coefficients: tuple[tuple[float, float], tuple[float, float]]  # checking states 2, 3
    bob_coefficients: tuple[tuple[float, float], tuple[float, float]]
    alice_phases: tuple[float, float]  # theta, theta~
    bob_phases: tuple[float, float]  # theta', theta~'
    seed: int | None = None
    config: AttackConfig = field(default_factory=AttackConfig)

    def to_dict(self) -> dict[str, Any]:
        def cplx(a):
            return np.stack([a.real, a.imag], axis=-1).tolist()

        return {
            "seed": self.seed,
            "config": self.config.__dict__,
            "alice_states": cplx(self.alice_states),
            "bob_states": cplx(self.bob_states),
            "kraus": cplx(self.kraus),
            "alice_coefficients": [list(c) for c in self.alice_coefficients],
            "bob_coefficients": [list(c) for c in self.bob_coefficients],
            "alice_phases": list(self.alice_phases),
            "bob_phases": list(self.bob_phases),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "AttackInstance":
        def cplx(x):
            a = np.asarray(x, dtype=np.float64)
            return a[..., 0] + 1j * a[..., 1]

        return cls(
            cplx(d["alice_states"]),
            cplx(d["bob_states"]),
            cplx(d["kraus"]),
            tuple(tuple(c) for c in d["alice_coefficients"]),
            tuple(tuple(c) for c in d["bob_coefficients"]),
            tuple(d["alice_phases"]),
            tuple(d["bob_phases"]),
            d.get("seed"),
            AttackConfig(**d.get("config", {})),
        )

    def checking_phase(self, k: int, l: int) -> float:
        """theta_k + theta'_l, the phase multiplying <G00|G11> for pair (k, l)."""
        return self.alice_phases[k - 2] + self.bob_phases[l - 2]


def _checking(phi0, phi1, c, theta):
    return c[0] * phi0 + c[1] * np.exp(1j * theta) * phi1


def _singlet_projector(theta: float) -> np.ndarray:
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    rot_bob = np.kron(np.eye(2), np.diag([1.0, np.exp(1j * theta)]))
    return np.outer(psi, psi.conj()) @ rot_bob


def ideal_attack(theta: float = 0.0) -> AttackInstance:
    """Singlet-projecting measurement with Bob's frame rotated about z by ``theta``.

    Alice sends |0>, |1>, |Phi=0>, |Phi=pi/2>; Bob sends |1>, |0>, |Phi=pi>,
    |Phi=3pi/2>. Bob's checking states are written as c0|1> + c1 e^{i theta'}|0>,
    which fixes theta' = pi and theta~' = pi/2 (global phases dropped).
    """
    h = 1.0 / math.sqrt(2.0)
    ket0, ket1 = np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
    a_ph, b_ph = (0.0, 0.5 * math.pi), (math.pi, 0.5 * math.pi)
    alice = np.array([ket0, ket1, _checking(ket0, ket1, (h, h), a_ph[0]), _checking(ket0, ket1, (h, h), a_ph[1])])
    bob = np.array([ket1, ket0, _checking(ket1, ket0, (h, h), b_ph[0]), _checking(ket1, ket0, (h, h), b_ph[1])])
    return AttackInstance(
        alice, bob, _singlet_projector(theta), ((h, h), (h, h)), ((h, h), (h, h)), a_ph, b_ph,
        None, AttackConfig(name="ideal", theta=theta),
    )


def _random_ket(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def _near(rng: np.random.Generator, ket: np.ndarray, jitter: float) -> np.ndarray:
    v = ket + jitter * (rng.normal(size=2) + 1j * rng.normal(size=2))
    return v / np.linalg.norm(v)


def _side(rng: np.random.Generator, config: AttackConfig, base=None):
    """Encoding states, then two checking states; ``base`` = (ket0, ket1, phases) to jitter around."""
    if base is None:
        phi0 = _random_ket(rng)
        while True:
            phi1 = _random_ket(rng)
            if abs(np.vdot(phi0, phi1)) <= config.max_overlap:
                break
    else:
        phi0, phi1 = _near(rng, base[0], config.jitter), _near(rng, base[1], config.jitter)
    states, coeffs, phases = [phi0, phi1], [], []
    for idx in range(2):
        while True:
            if base is None:
                beta = rng.uniform(0.0, 0.5 * math.pi)
                theta = rng.uniform(0.0, 2.0 * math.pi)
            else:
                beta = 0.25 * math.pi + config.jitter * rng.normal()
                theta = base[2][idx] + config.jitter * rng.normal()
            raw = _checking(phi0, phi1, (math.cos(beta), math.sin(beta)), theta)
            n = float(np.linalg.norm(raw))
            c = (math.cos(beta) / n, math.sin(beta) / n)
            if max(c) <= A_MAX:
                break
        states.append(_checking(phi0, phi1, c, theta))
        coeffs.append(c)
        phases.append(theta)
    return np.array(states), tuple(coeffs), tuple(phases)


def random_attack(seed: int, config: AttackConfig | None = None) -> AttackInstance:
    """Deterministic random instance for ``seed``."""
    config = config or AttackConfig()
    if config.name == "ideal":
        return ideal_attack(config.theta)
    rng = np.random.default_rng(seed)
    base_a = base_b = None
    if config.states == "ideal":
        ket0, ket1 = np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
        base_a, base_b = (ket0, ket1, (0.0, 0.5 * math.pi)), (ket1, ket0, (math.pi, 0.5 * math.pi))
    alice, a_c, a_ph = _side(rng, config, base_a)
    bob, b_c, b_ph = _side(rng, config, base_b)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = (1.0 - config.ideal_mix) * g / np.linalg.norm(g, 2) + config.ideal_mix * _singlet_projector(config.theta)
    factor = rng.uniform(1.0, config.scale_max)
    k = m / (max(np.linalg.norm(m, 2), 1e-300) * factor)
    return AttackInstance(alice, bob, k, a_c, b_c, a_ph, b_ph, seed, config)


def _image(attack: AttackInstance, i: int, j: int) -> np.ndarray:
    return attack.kraus @ np.kron(attack.alice_states[i], attack.bob_states[j])


def induced_table(attack: AttackInstance) -> ProbabilityTable:
    p = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            p[i, j] = np.vdot(_image(attack, i, j), _image(attack, i, j)).real
    return ProbabilityTable(np.clip(p, 0.0, 1.0))


def true_overlap(attack: AttackInstance) -> complex:
    """<G00|G11> = <phi0 phi'0|K^dag K|phi1 phi'1> / sqrt(p00 p11)."""
    x00, x11 = _image(attack, 0, 0), _image(attack, 1, 1)
    n00, n11 = np.vdot(x00, x00).real, np.vdot(x11, x11).real
    if n00 <= _DEGENERATE or n11 <= _DEGENERATE:
        raise ValueError("overlap undefined: p00 or p11 is zero")
    return complex(np.vdot(x00, x11) / math.sqrt(n00 * n11))


def true_real_parts(attack: AttackInstance) -> dict[str, float]:
    ov = true_overlap(attack)
    return {p.label: float((np.exp(1j * attack.checking_phase(p.k, p.l)) * ov).real) for p in PAIRS}


def constraint_residual(attack: AttackInstance, k: int = 2, l: int = 2) -> float:
    """Norm of K|phi_k phi'_l> minus its expansion over encoding-pair images."""
    ca, cb = attack.alice_coefficients[k - 2], attack.bob_coefficients[l - 2]
    ta, tb = attack.alice_phases[k - 2], attack.bob_phases[l - 2]
    total = np.zeros(4, dtype=complex)
    for m in (0, 1):
        for n in (0, 1):
            total += ca[m] * cb[n] * np.exp(1j * (ta * m + tb * n)) * _image(attack, m, n)
    return float(np.linalg.norm(_image(attack, k, l) - total))


@dataclass
class SoundnessResult:
    status: str  # "pass", "violation" or "degenerate"
    violations: list[str] = field(default_factory=list)
    omega: float | None = None
    true_modulus: float | None = None
    dump: dict[str, Any] | None = None

    @property
    def ok(self) -> bool:
        return self.status != "violation"


def soundness_check(
    attack: AttackInstance, settings: AnalysisSettings | None = None, slack: float = 1e-9
) -> SoundnessResult:
    """Run the RFI analysis on the induced table and compare with the true quantities."""
    settings = settings or AnalysisSettings()
    table = induced_table(attack)
    if table[0, 0] <= _DEGENERATE or table[1, 1] <= _DEGENERATE:
        return SoundnessResult("degenerate")

    violations: list[str] = []
    problems = validate_table(table, Mode.RFI)
    violations += [f"table: {msg}" for msg in problems]
    for side, coeffs in ((Side.ALICE, attack.alice_coefficients), (Side.BOB, attack.bob_coefficients)):
        for k, c in zip((2, 3), coeffs):
            if not is_feasible(CoefficientPoint(*c), side_row_spec(table, side, k)):
                violations.append(f"true coefficients {c} infeasible for {side.value} k={k}")

    ov = true_overlap(attack)
    truth = true_real_parts(attack)
    omega = None
    try:
        report = analyze(table, Mode.RFI, settings)
    except InconsistentTableError as exc:
        violations.append(f"analysis rejected a physical table: {exc}")
    else:
        omega = report.omega
        for label, iv in report.intervals.items():
            if not iv.contains(truth[label], slack):
                violations.append(f"pair {label}: true {truth[label]!r} outside [{iv.lower!r}, {iv.upper!r}]")
        if abs(ov) < omega - 1e-6:
            violations.append(f"true modulus {abs(ov)!r} below omega {omega!r}")

    phi = {p.label: attack.checking_phase(p.k, p.l) for p in PAIRS}
    gap = phi["22"] + phi["33"] - phi["23"] - phi["32"]
    if abs(math.remainder(gap, 2.0 * math.pi)) > 1e-9:
        violations.append(f"composite phase identity off by {gap!r}")

    if violations:
        return SoundnessResult("violation", violations, omega, abs(ov), attack.to_dict())
    return SoundnessResult("pass", [], omega, abs(ov))
