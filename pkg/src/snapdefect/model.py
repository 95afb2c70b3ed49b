"""Chain Hamiltonians: transverse-field Ising and Rydberg arrays.

Both models are reduced to a common spin-1/2 form consumed by the exact
diagonalizer and the worldline sampler:

    H = sum_{(i,j)} K_ij Z_i Z_j + sum_j g_j Z_j - sum_j h_j X_j + offset

with Z, X Pauli matrices.  For the Ising chain the couplings are already
in this form (K = -J, g = 0, h_j = h).  The Rydberg Hamiltonian

    H = sum_{i<j} V_ij n_i n_j + (Omega/2) sum_j sigma^x_j - Delta sum_j n_j,
    V_ij = Omega (R_b/a)^6 / d(i,j)^6

is rewritten through n_j = (1 + Z_j)/2, which yields K_ij = V_ij/4,
site fields g_j = sum_{i != j} V_ij/4 - Delta/2, h_j = -Omega/2 and a
constant offset.  All energies are stored in units of J (Ising) or
Omega (Rydberg); only the dimensionless ratio R_b/a enters.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

FULL_RANGE = "full"


class BoundaryCondition(enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"

    @classmethod
    def parse(cls, text: str) -> "BoundaryCondition":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ConfigurationError(
                f"unknown boundary condition {text!r}; expected 'open' or 'periodic'"
            ) from None


def _check_geometry(L: int, bc: BoundaryCondition) -> None:
    if L < 2:
        raise ConfigurationError(f"need at least 2 sites, got L={L}")
    if bc is BoundaryCondition.PERIODIC and L < 3:
        raise ConfigurationError(
            "periodic chains need L >= 3 (L=2 would double-count the bond)"
        )


def chain_distance(i: int, j: int, L: int, bc: BoundaryCondition) -> int:
    """Distance between sites in lattice units; minimum image when periodic."""
    d = abs(i - j)
    if bc is BoundaryCondition.PERIODIC:
        d = min(d, L - d)
    return d


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a chain Hamiltonian.

    Unused parameters for a given kind stay None.  `interaction_cutoff`
    is the maximum pair distance kept (lattice units) or "full".
    """

    kind: str
    L: int
    bc: BoundaryCondition
    J: float | None = None
    h: float | None = None
    omega: float | None = None
    delta_detuning: float | None = None
    rb_over_a: float | None = None
    interaction_cutoff: int | str = FULL_RANGE

    def __post_init__(self):
        if self.kind not in ("ising", "rydberg"):
            raise ConfigurationError(f"unknown model kind {self.kind!r}")
        _check_geometry(self.L, self.bc)
        for name in ("J", "h", "omega", "delta_detuning", "rb_over_a"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ConfigurationError(f"{name} must be finite, got {v}")

    @classmethod
    def ising(cls, L, J=1.0, h=1.0, bc=BoundaryCondition.OPEN) -> "ModelSpec":
        return cls(kind="ising", L=L, bc=bc, J=J, h=h)

    @classmethod
    def rydberg(
        cls,
        L,
        omega=1.0,
        delta_detuning=1.01,
        rb_over_a=1.920,
        bc=BoundaryCondition.OPEN,
        interaction_cutoff=FULL_RANGE,
    ) -> "ModelSpec":
        return cls(
            kind="rydberg",
            L=L,
            bc=bc,
            omega=omega,
            delta_detuning=delta_detuning,
            rb_over_a=rb_over_a,
            interaction_cutoff=interaction_cutoff,
        )

    def describe(self) -> dict:
        """JSON-friendly provenance record."""
        d = {"kind": self.kind, "L": self.L, "bc": self.bc.value}
        for name in ("J", "h", "omega", "delta_detuning", "rb_over_a"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        if self.kind == "rydberg":
            d["interaction_cutoff"] = self.interaction_cutoff
        return d


@dataclass(frozen=True)
class CouplingTable:
    """Pair couplings and site fields of a chain Hamiltonian.

    `pairs` holds (i, j, V_ij) with i < j in the model's natural pair
    basis: V multiplies Z_i Z_j for `pair_basis="zz"` (Ising) and
    n_i n_j for `pair_basis="nn"` (Rydberg).  `longitudinal` and
    `transverse` are the spin-form site fields g_j and h_j of the module
    convention H = sum K ZZ + sum g Z - sum h X + offset; for the "nn"
    basis they already include the rewrite contributions.
    """

    L: int
    bc: BoundaryCondition
    pairs: tuple[tuple[int, int, float], ...]
    pair_basis: str
    longitudinal: tuple[float, ...]
    transverse: tuple[float, ...]
    offset: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        _check_geometry(self.L, self.bc)
        if self.pair_basis not in ("zz", "nn"):
            raise ConfigurationError(f"unknown pair basis {self.pair_basis!r}")
        seen = set()
        for (i, j, V) in self.pairs:
            if not (0 <= i < j < self.L):
                raise ConfigurationError(f"bad pair ({i},{j}) for L={self.L}")
            if (i, j) in seen:
                raise ConfigurationError(f"duplicate pair ({i},{j})")
            if not math.isfinite(V):
                raise ConfigurationError(f"non-finite coupling on pair ({i},{j})")
            seen.add((i, j))
        if len(self.longitudinal) != self.L or len(self.transverse) != self.L:
            raise ConfigurationError("field arrays must have one entry per site")

    # -- spin-form views -------------------------------------------------

    def zz_couplings(self) -> np.ndarray:
        """Pairs as a float array [(i, j, K_ij)] with K multiplying Z_i Z_j."""
        scale = 1.0 if self.pair_basis == "zz" else 0.25
        out = np.array([(i, j, V * scale) for (i, j, V) in self.pairs], dtype=float)
        return out.reshape(-1, 3)

    def field_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(g, h) site-field arrays of the spin form."""
        return np.asarray(self.longitudinal, float), np.asarray(self.transverse, float)

    def n_bonds(self) -> int:
        return len(self.pairs)


def build_ising(L, J, h, bc) -> CouplingTable:
    """Nearest-neighbor transverse-field Ising chain H = sum -J Z Z - h X.

    The chain is critical at J = h (used by defaults elsewhere, not
    enforced here).
    """
    _check_geometry(L, bc)
    for name, v in (("J", J), ("h", h)):
        if not math.isfinite(v):
            raise ConfigurationError(f"{name} must be finite")
    pairs = [(j, j + 1, -float(J)) for j in range(L - 1)]
    if bc is BoundaryCondition.PERIODIC:
        pairs.append((0, L - 1, -float(J)))
    return CouplingTable(
        L=L,
        bc=bc,
        pairs=tuple(pairs),
        pair_basis="zz",
        longitudinal=(0.0,) * L,
        transverse=(float(h),) * L,
        offset=0.0,
        meta={"model": "ising", "J": float(J), "h": float(h)},
    )


def build_rydberg(
    L,
    omega,
    delta_detuning,
    rb_over_a,
    bc,
    interaction_cutoff=FULL_RANGE,
) -> CouplingTable:
    """Rydberg chain with 1/d^6 interactions, rewritten to spin variables.

    Pairs with distance beyond `interaction_cutoff` are dropped; the
    cutoff is clamped to the largest distance the geometry supports.
    """
    _check_geometry(L, bc)
    if rb_over_a is None or rb_over_a <= 0:
        raise ConfigurationError(f"rb_over_a must be positive, got {rb_over_a}")
    for name, v in (("omega", omega), ("delta_detuning", delta_detuning)):
        if not math.isfinite(v):
            raise ConfigurationError(f"{name} must be finite")

    max_dist = L // 2 if bc is BoundaryCondition.PERIODIC else L - 1
    if interaction_cutoff == FULL_RANGE:
        cutoff = max_dist
    else:
        cutoff = int(interaction_cutoff)
        if cutoff < 1:
            raise ConfigurationError(f"interaction_cutoff must be >= 1, got {cutoff}")
        if cutoff > max_dist:
            warnings.warn(
                f"interaction_cutoff={cutoff} exceeds the maximum distance {max_dist} "
                f"for L={L} ({bc.value}); clamping",
                stacklevel=2,
            )
            cutoff = max_dist

    v_of = lambda d: omega * rb_over_a**6 / d**6
    pairs = []
    for i in range(L):
        for j in range(i + 1, L):
            d = chain_distance(i, j, L, bc)
            if d <= cutoff:
                pairs.append((i, j, float(v_of(d))))

    # n = (1+Z)/2 rewrite: V n n -> V/4 (ZZ + Z_i + Z_j + 1),  -Delta n -> -Delta/2 (Z + 1)
    g = np.full(L, -delta_detuning / 2.0)
    offset = -delta_detuning * L / 2.0
    for (i, j, V) in pairs:
        g[i] += V / 4.0
        g[j] += V / 4.0
        offset += V / 4.0
    return CouplingTable(
        L=L,
        bc=bc,
        pairs=tuple(pairs),
        pair_basis="nn",
        longitudinal=tuple(float(x) for x in g),
        transverse=(-float(omega) / 2.0,) * L,
        offset=float(offset),
        meta={
            "model": "rydberg",
            "omega": float(omega),
            "delta_detuning": float(delta_detuning),
            "rb_over_a": float(rb_over_a),
            "interaction_cutoff": cutoff,
        },
    )


def build_table(spec: ModelSpec) -> CouplingTable:
    if spec.kind == "ising":
        if spec.J is None or spec.h is None:
            raise ConfigurationError("ising model needs J and h")
        return build_ising(spec.L, spec.J, spec.h, spec.bc)
    if spec.omega is None or spec.delta_detuning is None or spec.rb_over_a is None:
        raise ConfigurationError("rydberg model needs omega, delta_detuning, rb_over_a")
    return build_rydberg(
        spec.L,
        spec.omega,
        spec.delta_detuning,
        spec.rb_over_a,
        spec.bc,
        spec.interaction_cutoff,
    )
