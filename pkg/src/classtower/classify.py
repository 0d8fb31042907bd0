"""End-to-end decision logic for a prime pair: invariants, predictions, validation.

The flow is invariants() -> predict() -> cross_validate().  The norm class
groups and capitulation kernels are transcribed decision tables keyed by the
symbols (legendre, pi, B, q); norm_groups_from_symbols() recomputes the same
subgroups from first principles (one quadratic symbol per generator class and
radicand representation) to keep the transcription honest, and
cross_validate() rebuilds everything inside the concrete group model, where
abelianizations and transfer kernels are computed rather than looked up.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

from .abelian import AbelianType
from .gaussian import (
    ONE_PLUS_I,
    GaussianInt,
    PrimeSplit,
    gauss_symbol,
    split_prime,
    symbol_B,
    symbol_pi,
)
from .gengroup import (
    CLASS_VECTORS,
    ClassVector,
    GPresentation,
    PsiVariant,
    Subgroup,
    abelian_invariants,
    class_to_group,
    lower_central_series,
    span,
    transfer_kernel,
    vadd,
)
from .quadratic import exponents_mn, norm_eps
from .symbols import PrimePair, quartic_symbol, validate_pair
from .unitindex import unit_index_q

__all__ = [
    "ConsistencyError",
    "InvariantRecord",
    "FieldLabel",
    "KPrediction",
    "LPrediction",
    "PredictionReport",
    "Check",
    "ValidationReport",
    "invariants",
    "field_layout",
    "norm_groups",
    "norm_groups_from_symbols",
    "predict",
    "cross_validate",
    "classify_pair",
]


class ConsistencyError(AssertionError):
    """Computed invariants violate a relation that is supposed to be forced."""


# ---------------------------------------------------------------------------
# Class vectors by name
# ---------------------------------------------------------------------------

_BASIS = {"H0": (1, 0, 0), "H1": (0, 1, 0), "H2": (0, 0, 1)}


def class_vector(name: str) -> ClassVector:
    """Parse 'H0H2' style products of the ideal-class generators."""
    v = (0, 0, 0)
    for i in range(0, len(name), 2):
        v = vadd(v, _BASIS[name[i : i + 2]])
    return v


def subgroup_span(names) -> frozenset[ClassVector]:
    return span([class_vector(t) for t in names])


def vector_name(v: ClassVector) -> str:
    if v == (0, 0, 0):
        return "1"
    return "".join(n for n, b in zip(("H0", "H1", "H2"), v) if b)


# ---------------------------------------------------------------------------
# Invariant record
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantRecord:
    pair: PrimePair
    legendre: int
    pi: int  # (pi_1/pi_3)
    B: int  # (1+i/pi_1)(1+i/pi_3)
    m: int
    n: int
    q: int
    norm_eps_r: int
    psi: PsiVariant
    conj_swapped: bool = False  # True when built with the swapped factor of p2

    @property
    def d(self) -> int:
        return self.pair.d

    def profile(self) -> tuple:
        return (self.legendre, self.pi, self.B, self.q, self.m, self.n, self.psi)

    def splits(self) -> tuple[PrimeSplit, PrimeSplit]:
        s1 = split_prime(self.pair.p1)
        s2 = split_prime(self.pair.p2)
        if self.conj_swapped:
            s2 = s2.conjugate_choice()
        return s1, s2


def invariants(pair: PrimePair, conj_swap: bool = False) -> InvariantRecord:
    """All classification symbols and exponents for a pair, consistency-checked.

    conj_swap exchanges pi_3 with its conjugate; the documented symmetry that
    permutes the K4/K5 and K6/K7 (and matching L) predictions.
    """
    s1, s2 = split_prime(pair.p1), split_prime(pair.p2)
    if conj_swap:
        s2 = s2.conjugate_choice()
    legendre = pair.legendre
    pi = symbol_pi(s1, s2)
    b = symbol_B(s1, s2)
    m, n = exponents_mn(pair)
    q = unit_index_q(pair)
    nrm = norm_eps(pair.r)
    psi = (
        PsiVariant.SIGMA_ONLY
        if (legendre == 1 and nrm == 1)
        else PsiVariant.TAU_SIGMA
    )
    record = InvariantRecord(pair, legendre, pi, b, m, n, q, nrm, psi, conj_swap)
    _check_consistency(record)
    return record


def _check_consistency(rec: InvariantRecord) -> None:
    def fail(rule: str, detail: str):
        raise ConsistencyError(f"pair {rec.pair}: {rule} violated: {detail}")

    if rec.legendre == -1 and rec.norm_eps_r != -1:
        fail("unit norm rule", f"(p1/p2) = -1 needs N(eps_r) = -1, got {rec.norm_eps_r}")
    if rec.norm_eps_r == 1 and rec.q != 1:
        fail("unit index rule", f"N(eps_r) = +1 forces q = 1, got q={rec.q}")
    if rec.legendre == 1:
        quartic = quartic_symbol(rec.pair.p1, rec.pair.p2) * quartic_symbol(
            rec.pair.p2, rec.pair.p1
        )
        if quartic != rec.pi:
            fail(
                "quartic product identity",
                f"(p1/p2)_4 (p2/p1)_4 = {quartic} but (pi1/pi3) = {rec.pi}",
            )
    if rec.legendre == -1 and (rec.q == 1) != (rec.pi == rec.B):
        fail(
            "q-symbol equivalence",
            f"q={rec.q} but pi={rec.pi}, B={rec.B}",
        )
    # exponent constraints (the q/m/n coupling)
    if rec.q == 2 and rec.m != 2:
        fail("exponent coupling (q=2)", f"q = 2 forces m = 2, got m={rec.m}")
    if rec.legendre == -1 and rec.n != 1:
        fail("exponent coupling", f"(p1/p2) = -1 forces n = 1, got n={rec.n}")
    if rec.q == 1 and rec.legendre == -1 and rec.m < 3:
        fail("exponent coupling (q=1)", f"needs m >= 3, got m={rec.m}")
    if rec.legendre == 1:
        if rec.pi == -1 and not (rec.n == 1 and rec.m >= 3 and rec.q == 1):
            fail(
                "exponent coupling",
                f"(p1/p2)=1, quartic=-1 needs q=1, n=1, m>=3; got q={rec.q}, m={rec.m}, n={rec.n}",
            )
        if rec.pi == 1 and not (rec.m == 2 and rec.n >= 2):
            fail(
                "exponent coupling",
                f"(p1/p2)=1, quartic=+1 needs m=2, n>=2; got m={rec.m}, n={rec.n}",
            )


# ---------------------------------------------------------------------------
# Field catalog
# ---------------------------------------------------------------------------

L_FACTORS = {1: (1, 2, 3), 2: (1, 4, 6), 3: (1, 5, 7), 4: (2, 4, 5), 5: (2, 6, 7), 6: (3, 4, 7), 7: (3, 5, 6)}

_K_RADICANDS = {
    1: "p1",
    2: "p2",
    3: "2",
    4: "pi1*pi3",
    5: "pi1*pi4",
    6: "pi2*pi3",
    7: "pi2*pi4",
}


@dataclass(frozen=True)
class FieldLabel:
    kind: str  # "K" or "L"
    index: int
    radicand: str | None  # K fields
    factors: tuple[int, ...]  # K indices composing an L field
    normal_over_Q: bool
    note: str

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"


def field_layout(record: InvariantRecord) -> list[FieldLabel]:
    """The 7 + 7 unramified extensions with their composition structure."""
    out = []
    notes_k = {
        1: "abelian over Q (inside the genus field)",
        2: "abelian over Q (inside the genus field)",
        3: "abelian over Q (inside the genus field)",
        4: "conjugate to K7",
        5: "conjugate to K6",
        6: "conjugate to K5",
        7: "conjugate to K4",
    }
    for j in range(1, 8):
        out.append(
            FieldLabel("K", j, _K_RADICANDS[j], (), j <= 3, notes_k[j])
        )
    notes_l = {
        1: "genus field",
        2: "conjugate to L3",
        3: "conjugate to L2",
        4: "conjugate to L5",
        5: "conjugate to L4",
        6: "Galois over Q",
        7: "Galois over Q",
    }
    for j in range(1, 8):
        out.append(FieldLabel("L", j, None, L_FACTORS[j], j in (1, 6, 7), notes_l[j]))
    return out


def discriminant_of_base_field(pair: PrimePair) -> int:
    # product of the three quadratic subfield discriminants
    return 256 * pair.p1**2 * pair.p2**2


# ---------------------------------------------------------------------------
# Norm class groups: transcribed table and first-principles recomputation
# ---------------------------------------------------------------------------

# legendre = +1; the K4..K7 entries are keyed (pi, B)
_N_PLUS = {
    1: ("H0H1", "H0H2"),
    2: ("H1", "H2"),
    3: ("H0", "H1H2"),
    4: {(-1, 1): ("H0", "H2"), (1, 1): ("H0", "H1"), (-1, -1): ("H2", "H0H1"), (1, -1): ("H1", "H0H2")},
    5: {(-1, 1): ("H2", "H0H1"), (1, 1): ("H1", "H0H2"), (-1, -1): ("H0", "H2"), (1, -1): ("H0", "H1")},
    6: {(-1, 1): ("H1", "H0H2"), (1, 1): ("H2", "H0H1"), (-1, -1): ("H0", "H1"), (1, -1): ("H0", "H2")},
    7: {(-1, 1): ("H0", "H1"), (1, 1): ("H0", "H2"), (-1, -1): ("H1", "H0H2"), (1, -1): ("H2", "H0H1")},
}

# legendre = -1; the K4..K7 entries are keyed (q, pi)
_N_MINUS = {
    1: ("H1", "H2"),
    2: ("H0H1", "H0H2"),
    3: ("H0", "H1H2"),
    4: {(1, -1): ("H1", "H0H2"), (1, 1): ("H0", "H2"), (2, -1): ("H0", "H1"), (2, 1): ("H2", "H0H1")},
    5: {(1, -1): ("H0", "H2"), (1, 1): ("H1", "H0H2"), (2, -1): ("H2", "H0H1"), (2, 1): ("H0", "H1")},
    6: {(1, -1): ("H0", "H1"), (1, 1): ("H2", "H0H1"), (2, -1): ("H1", "H0H2"), (2, 1): ("H0", "H2")},
    7: {(1, -1): ("H2", "H0H1"), (1, 1): ("H0", "H1"), (2, -1): ("H0", "H2"), (2, 1): ("H1", "H0H2")},
}


def norm_groups(record: InvariantRecord) -> dict[int, frozenset[ClassVector]]:
    """The norm class groups N_1..N_7 from the transcribed decision table."""
    table = _N_PLUS if record.legendre == 1 else _N_MINUS
    out = {}
    for j in range(1, 8):
        entry = table[j]
        if isinstance(entry, dict):
            key = (record.pi, record.B) if record.legendre == 1 else (record.q, record.pi)
            entry = entry[key]
        out[j] = subgroup_span(entry)
    return out


# radicand factorizations: each K_j has the two representations delta, d/delta
_RADICAND_FACTORS = {
    1: (("pi1", "pi2"), ("2", "pi3", "pi4")),
    2: (("pi3", "pi4"), ("2", "pi1", "pi2")),
    3: (("2",), ("pi1", "pi2", "pi3", "pi4")),
    4: (("pi1", "pi3"), ("2", "pi2", "pi4")),
    5: (("pi1", "pi4"), ("2", "pi2", "pi3")),
    6: (("pi2", "pi3"), ("2", "pi1", "pi4")),
    7: (("pi2", "pi4"), ("2", "pi1", "pi3")),
}


def norm_groups_from_symbols(
    record: InvariantRecord,
) -> dict[int, frozenset[ClassVector]]:
    """N_1..N_7 recomputed from first principles, one symbol per generator.

    Membership of [H] in N_j is (delta/H) = 1 for a representation delta of
    the radicand coprime to H.  For H1, H2 that is a single quadratic symbol
    mod pi_1 or pi_2; for H0 (the prime over 1+i) it is the product of
    (1+i/pi) over the Gaussian prime factors of the odd representation.
    """
    s1, s2 = record.splits()
    gauss = {
        "2": GaussianInt(2, 0),
        "pi1": s1.pi,
        "pi2": s1.pi_bar,
        "pi3": s2.pi,
        "pi4": s2.pi_bar,
    }
    out = {}
    for j in range(1, 8):
        reps = _RADICAND_FACTORS[j]
        chi = {}
        odd_rep = next(rep for rep in reps if "2" not in rep)
        chi["H0"] = 1
        for f in odd_rep:
            chi["H0"] *= gauss_symbol(ONE_PLUS_I, gauss[f])
        for name, avoid in (("H1", "pi1"), ("H2", "pi2")):
            rep = next(rep for rep in reps if avoid not in rep)
            alpha = reduce(GaussianInt.__mul__, (gauss[f] for f in rep))
            chi[name] = gauss_symbol(alpha, gauss[avoid])
        signs = (chi["H0"], chi["H1"], chi["H2"])
        assert signs != (1, 1, 1), f"norm group of K{j} came out with index 1"
        out[j] = frozenset(
            v
            for v in CLASS_VECTORS
            if signs[0] ** v[0] * signs[1] ** v[1] * signs[2] ** v[2] == 1
        )
    return out


# ---------------------------------------------------------------------------
# Capitulation kernels and abelian types (transcribed predictions)
# ---------------------------------------------------------------------------

# kernels for K4..K7 depend only on B; K3 depends only on q
_KAPPA_B = {
    4: {1: ("H0", "H1"), -1: ("H1", "H0H2")},
    5: {1: ("H1", "H0H2"), -1: ("H0", "H1")},
    6: {1: ("H2", "H0H1"), -1: ("H0", "H2")},
    7: {1: ("H0", "H2"), -1: ("H2", "H0H1")},
}


def kernels(record: InvariantRecord) -> dict[int, frozenset[ClassVector]]:
    out = {
        1: subgroup_span(("H1", "H2")),
        2: subgroup_span(("H0H1", "H0H2")),
        3: subgroup_span(("H0", "H1H2") if record.q == 1 else ("H0",)),
    }
    for j in range(4, 8):
        out[j] = subgroup_span(_KAPPA_B[j][record.B])
    return out


def k_type(record: InvariantRecord, j: int) -> AbelianType:
    m, n, q = record.m, record.n, record.q
    if j in (1, 2):
        return AbelianType((2, 2, 2)) if record.legendre == 1 else AbelianType((2, 4))
    if j == 3:
        if q == 1:
            return AbelianType.from_factors((1 << m, 1 << (n + 1)))
        return AbelianType.from_factors(
            (1 << min(m, n + 1), 1 << max(m + 1, n + 2))
        )
    if record.legendre == 1:
        return AbelianType((2, 2, 2)) if record.pi == -1 else AbelianType((2, 4))
    # legendre = -1: K4/K7 and K5/K6 pair up, exchanged by the sign of pi
    two_four = {4, 7} if record.pi == -1 else {5, 6}
    return AbelianType((2, 4)) if j in two_four else AbelianType((2, 2, 2))


def l_type(record: InvariantRecord, j: int) -> AbelianType:
    m, n, q = record.m, record.n, record.q
    if j == 1:
        if q == 1:
            return AbelianType.from_factors((1 << n, 1 << m))
        return AbelianType.from_factors((1 << min(m, n), 1 << max(m + 1, n + 1)))
    if j in (2, 3, 4, 5):
        if record.legendre == 1 and record.pi == -1:
            return AbelianType((2, 2, 2))
        return AbelianType((2, 4))
    # L6 / L7
    if q == 2:
        if record.legendre == 1:
            return AbelianType.from_factors((2, 1 << (n + 2)))
        flip = (record.pi == -1) == (j == 6)
        return AbelianType((2, 8)) if flip else AbelianType((4, 4))
    b_here = record.B if j == 6 else -record.B
    if b_here == 1:
        return AbelianType.from_factors((1 << (m - 1), 1 << (n + 1)))
    return AbelianType.from_factors((1 << min(m - 1, n), 1 << max(m, n + 1)))


def derived_type(record: InvariantRecord) -> AbelianType:
    m, n, q = record.m, record.n, record.q
    if q == 1:
        return AbelianType.from_factors((1 << (m - 1), 1 << n))
    return AbelianType.from_factors((2, 1 << (n + 1)))


def nilpotency_class_formula(record: InvariantRecord) -> int:
    m, n, q = record.m, record.n, record.q
    return max(n, m - 1) + 1 if q == 1 else max(n + 1, m) + 1


# ---------------------------------------------------------------------------
# Subgroup words from the tables (transcription cross-checks)
# ---------------------------------------------------------------------------

_GJ_PLUS = {
    1: ("s", "tr", "tt"),
    2: ("s", "r", "tt"),
    3: ("t", "s"),
    4: {(-1, 1): ("t", "rs", "ss"), (1, 1): ("t", "r"), (-1, -1): ("st", "tr", "ss"), (1, -1): ("st", "r")},
    5: {(-1, 1): ("st", "tr", "ss"), (1, 1): ("st", "r"), (-1, -1): ("t", "rs", "ss"), (1, -1): ("t", "r")},
    6: {(-1, 1): ("st", "r", "ss"), (1, 1): ("st", "tr"), (-1, -1): ("t", "r", "ss"), (1, -1): ("t", "rs")},
    7: {(-1, 1): ("t", "r", "ss"), (1, 1): ("t", "rs"), (-1, -1): ("st", "r", "ss"), (1, -1): ("st", "tr")},
}

_GJ_MINUS = {
    1: ("s", "r"),
    2: ("s", "tr"),
    3: ("t", "s"),
    4: {(1, -1): ("r", "ts"), (1, 1): ("t", "rs", "ss"), (2, -1): ("t", "r"), (2, 1): ("st", "tr", "ss")},
    5: {(1, -1): ("t", "rs", "ss"), (1, 1): ("r", "st"), (2, -1): ("st", "tr", "ss"), (2, 1): ("t", "r")},
    6: {(1, -1): ("t", "r", "ss"), (1, 1): ("st", "tr"), (2, -1): ("r", "st", "ss"), (2, 1): ("t", "rs")},
    7: {(1, -1): ("st", "tr"), (1, 1): ("r", "t", "ss"), (2, -1): ("t", "rs"), (2, 1): ("r", "st", "ss")},
}

_GL_PLUS = {
    1: ("tt", "s"),
    2: {(-1, 1): ("str", "ss", "tt"), (-1, -1): ("tr", "ss", "tt"), (1, 1): ("tr", "tt"), (1, -1): ("str", "tt")},
    3: {(-1, 1): ("tr", "ss", "tt"), (-1, -1): ("str", "ss", "tt"), (1, 1): ("str", "tt"), (1, -1): ("tr", "tt")},
    4: {-1: ("sr", "ss", "tt"), 1: ("r", "tt")},
    5: {-1: ("r", "ss", "tt"), 1: ("rs", "tt")},
    6: {-1: ("st", "ss"), 1: ("t", "ss")},  # keyed by B
    7: {-1: ("t", "ss"), 1: ("st", "ss")},  # keyed by B
}

_GL_MINUS = {
    1: ("tt", "s"),
    2: {-1: ("r", "ss"), 1: ("rs", "ss")},  # keyed by pi
    3: {-1: ("rs", "ss"), 1: ("r", "ss")},
    4: {1: ("str", "ss"), 2: ("tr", "ss")},  # keyed by q
    5: {1: ("tr", "ss"), 2: ("str", "ss")},
    6: {(1, -1): ("st", "tt"), (1, 1): ("t", "ss"), (2, -1): ("t", "ss"), (2, 1): ("st", "ss")},
    7: {(1, -1): ("t", "ss"), (1, 1): ("st", "ss"), (2, -1): ("st", "ss"), (2, 1): ("t", "ss")},
}


def _gj_words(record: InvariantRecord, j: int):
    table = _GJ_PLUS if record.legendre == 1 else _GJ_MINUS
    entry = table[j]
    if isinstance(entry, dict):
        key = (record.pi, record.B) if record.legendre == 1 else (record.q, record.pi)
        entry = entry[key]
    return entry


def _gl_words(record: InvariantRecord, j: int):
    table = _GL_PLUS if record.legendre == 1 else _GL_MINUS
    entry = table[j]
    if isinstance(entry, dict):
        if record.legendre == 1:
            if j in (2, 3):
                entry = entry[(record.pi, record.B)]
            elif j in (4, 5):
                entry = entry[record.pi]
            else:
                entry = entry[record.B]
        else:
            if j in (2, 3):
                entry = entry[record.pi]
            elif j in (4, 5):
                entry = entry[record.q]
            else:
                entry = entry[(record.q, record.pi)]
    return entry


# ---------------------------------------------------------------------------
# Prediction report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KPrediction:
    index: int
    radicand: str
    norm_group: frozenset[ClassVector]
    kernel: frozenset[ClassVector]
    cl2: AbelianType
    taussky_A: bool


@dataclass(frozen=True)
class LPrediction:
    index: int
    factors: tuple[int, ...]
    norm_group: frozenset[ClassVector]
    kernel: frozenset[ClassVector]
    cl2: AbelianType


@dataclass(frozen=True)
class PredictionReport:
    record: InvariantRecord
    disc: int
    group_order: int
    derived: AbelianType  # = Cl2 of the first Hilbert field
    cl2_k3: AbelianType
    coclass: int
    nilpotency_class: int
    k_fields: dict[int, KPrediction]
    l_fields: dict[int, LPrediction]

    @property
    def kernel_sizes(self) -> dict[str, int]:
        sizes = {f"K{j}": len(self.k_fields[j].kernel) for j in range(1, 8)}
        sizes.update({f"L{j}": len(self.l_fields[j].kernel) for j in range(1, 8)})
        return sizes


def predict(record: InvariantRecord) -> PredictionReport:
    m, n, q = record.m, record.n, record.q
    norms = norm_groups(record)
    kerns = kernels(record)
    k_fields = {}
    for j in range(1, 8):
        kern = kerns[j]
        norm = norms[j]
        k_fields[j] = KPrediction(
            j,
            _K_RADICANDS[j],
            norm,
            kern,
            k_type(record, j),
            len(kern & norm) > 1,
        )
    l_fields = {}
    full = frozenset(CLASS_VECTORS)
    for j in range(1, 8):
        a, b, c = L_FACTORS[j]
        l_fields[j] = LPrediction(
            j,
            L_FACTORS[j],
            norms[a] & norms[b] & norms[c],
            full,
            l_type(record, j),
        )
    order_bits = m + n + (2 if q == 1 else 3)
    report = PredictionReport(
        record,
        discriminant_of_base_field(record.pair),
        1 << order_bits,
        derived_type(record),
        k_type(record, 3),
        3,
        nilpotency_class_formula(record),
        k_fields,
        l_fields,
    )
    _check_report(report)
    return report


def _check_report(report: PredictionReport) -> None:
    rec = report.record
    for j, kf in report.k_fields.items():
        if len(kf.norm_group) != 4:
            raise ConsistencyError(f"norm group of K{j} must have index 2")
        expected = 4 if (j != 3 or rec.q == 1) else 2
        if len(kf.kernel) != expected:
            raise ConsistencyError(f"kernel size of K{j}: {len(kf.kernel)} != {expected}")
        if not kf.taussky_A:
            raise ConsistencyError(f"K{j} fails Taussky condition A")
    for j, lf in report.l_fields.items():
        if len(lf.norm_group) != 2:
            raise ConsistencyError(f"norm group of L{j} must have index 4")
    # h(K3) product rule: |Cl2(K3)| = 2^(n+m+1) for q=1, 2^(n+m+2) for q=2
    expected = 1 << (rec.n + rec.m + (1 if rec.q == 1 else 2))
    if report.cl2_k3.order() != expected:
        raise ConsistencyError(
            f"|Cl2(K3)| = {report.cl2_k3.order()} != {expected} (class number product rule)"
        )


# ---------------------------------------------------------------------------
# Cross-validation against the group engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    expected: str
    got: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _fmt_vectors(vs) -> str:
    return "{" + ",".join(sorted(vector_name(v) for v in vs)) + "}"


@lru_cache(maxsize=None)
def _engine_checks(profile: tuple) -> tuple[Check, ...]:
    legendre, pi, b, q, m, n, psi = profile
    rec = _profile_record(profile)
    pres = GPresentation(m, n, q, psi)
    checks: list[Check] = []

    def add(name, expected, got):
        checks.append(Check(name, expected == got, str(expected), str(got)))

    G = Subgroup.whole_group(pres)
    Gp = G.derived_subgroup()
    add("G:order", 1 << (m + n + (2 if q == 1 else 3)), G.order)
    add("G:derived-generators", True, Gp.elements == Subgroup.generated(
        pres, [pres.word("ss"), pres.word("tt")]
    ).elements)
    add("G:abelianization", AbelianType((2, 2, 2)), abelian_invariants(G, Gp))
    add("G:derived-type", derived_type(rec), abelian_invariants(Gp, Subgroup.trivial(pres)))
    series = lower_central_series(pres)
    add("G:nilpotency-class", nilpotency_class_formula(rec), len(series) - 1)
    add("G:coclass", 3, G.order.bit_length() - 1 - (len(series) - 1))

    norms = norm_groups(rec)
    kerns = kernels(rec)
    subgroups: dict[int, Subgroup] = {}
    for j in range(1, 8):
        gens = [class_to_group(pres, v) for v in norms[j]] + list(Gp.generators)
        Gj = Subgroup.generated(pres, gens)
        subgroups[j] = Gj
        add(f"K{j}:index", 2, Gj.index_in(G))
        words = Subgroup.generated(pres, [pres.word(w) for w in _gj_words(rec, j)])
        add(f"K{j}:subgroup-words", True, Gj.elements == words.elements)
        add(f"K{j}:type", k_type(rec, j), Gj.abelianization())
        kern = transfer_kernel(pres, Gj)
        add(f"K{j}:kernel", _fmt_vectors(kerns[j]), _fmt_vectors(kern))
        add(f"K{j}:taussky-A", True, len(kern & norms[j]) > 1)
    add("K3:class-group", k_type(rec, 3), subgroups[3].abelianization())

    full = frozenset(CLASS_VECTORS)
    for j in range(1, 8):
        fa, fb, fc = L_FACTORS[j]
        Hj = subgroups[fa].intersection(subgroups[fb]).intersection(subgroups[fc])
        add(f"L{j}:index", 4, Hj.index_in(G))
        words = Subgroup.generated(pres, [pres.word(w) for w in _gl_words(rec, j)])
        add(f"L{j}:subgroup-words", True, Hj.elements == words.elements)
        add(f"L{j}:type", l_type(rec, j), Hj.abelianization())
        kern = transfer_kernel(pres, Hj)
        add(f"L{j}:kernel-total", _fmt_vectors(full), _fmt_vectors(kern))
    return tuple(checks)


def _profile_record(profile: tuple) -> InvariantRecord:
    """A detached record carrying only the symbol data (no pair), for table lookups."""
    legendre, pi, b, q, m, n, psi = profile
    return InvariantRecord(
        PrimePair(0, 0), legendre, pi, b, q=q, m=m, n=n, norm_eps_r=0, psi=psi
    )


def cross_validate(record: InvariantRecord) -> ValidationReport:
    """Engine-vs-prediction comparison of all 14 extensions plus the globals.

    Everything keyed purely by the symbol profile is cached; the per-pair part
    re-derives the norm groups from first-principles symbols and compares
    against the transcribed table.
    """
    checks = list(_engine_checks(record.profile()))
    table = norm_groups(record)
    first_principles = norm_groups_from_symbols(record)
    for j in range(1, 8):
        checks.append(
            Check(
                f"K{j}:norm-group-symbols",
                table[j] == first_principles[j],
                _fmt_vectors(table[j]),
                _fmt_vectors(first_principles[j]),
            )
        )
    return ValidationReport(tuple(checks))


def engine_abelianizations(profile: tuple) -> dict[str, AbelianType]:
    """The 14 subgroup abelianizations for a symbol tuple and exponents.

    profile = (legendre, pi, B, q, m, n, psi); raises KeyError when the symbol
    tuple falls outside the tabulated cases.
    """
    legendre, pi, b, q, m, n, psi = profile
    rec = _profile_record(profile)
    pres = GPresentation(m, n, q, psi)
    Gp = Subgroup.whole_group(pres).derived_subgroup()
    norms = norm_groups(rec)
    out: dict[str, AbelianType] = {}
    subgroups = {}
    for j in range(1, 8):
        gens = [class_to_group(pres, v) for v in norms[j]] + list(Gp.generators)
        Gj = Subgroup.generated(pres, gens)
        subgroups[j] = Gj
        out[f"K{j}"] = Gj.abelianization()
    for j in range(1, 8):
        fa, fb, fc = L_FACTORS[j]
        Hj = subgroups[fa].intersection(subgroups[fb]).intersection(subgroups[fc])
        out[f"L{j}"] = Hj.abelianization()
    return out


def classify_pair(p1: int, p2: int, conj_swap: bool = False):
    """Full pipeline: validate, compute invariants, predict, cross-validate."""
    pair = validate_pair(p1, p2)
    record = invariants(pair, conj_swap=conj_swap)
    report = predict(record)
    validation = cross_validate(record)
    return record, report, validation
