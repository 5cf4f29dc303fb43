"""Golden-ratio case (degree 2): the finite state machine of label triples.

For m = 2 the gap alphabet has three letters; written a (= d_1), b (= d_2,
the smallest) and D (= d_0, the last gap), with the very first gap of each
level renamed a0, only six label windows of length three ever occur.  The
window of a triple determines how many of its refinements are again
triples with this triple as unique ancestor, and each such edge carries a
fixed 3x3 weight-transition matrix.

Walking this graph決 settles the degree-2 dichotomy exactly: for the
symmetric pair every reachable weight triple is 2-balanced (pair-sum ratio
in [1/2, 2]), while any asymmetric pair admits a path whose ratio grows
geometrically, yielding an exact divergence certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .algebra import make_field
from .errors import NoEdgeError
from .levels import Level, CheckResult, build_levels, normalize_pair
from .ratmat import Mat3
from .substitution import level_word
from .witness import Certificate


class TripleState(Enum):
    """The six label windows a triple can carry (a0 marks the leftmost gap)."""

    S0 = ("a0", "b", "a")
    S1 = ("a", "b", "a")
    S2 = ("b", "a", "a")
    S3 = ("b", "a", "D")
    H1 = ("a", "a", "b")
    H2 = ("b", "a", "b")

    @property
    def word(self) -> tuple[str, str, str]:
        return self.value


_STATE_OF_WORD = {s.value: s for s in TripleState}

#: one refinement step on the four-letter alphabet
_RULES = {
    "a0": ("a0", "b"),
    "a": ("a", "b"),
    "b": ("a",),
    "D": ("a", "D"),
}

#: window offsets (in points one rank down) of the offspring triples
WINDOWS = {
    TripleState.S0: (0, 1, 2),
    TripleState.S1: (1, 2),
    TripleState.H1: (1, 2),
    TripleState.S3: (1, 2),
    TripleState.S2: (1,),
    TripleState.H2: (1,),
}


def modified_substitute(word) -> tuple[str, ...]:
    """Image of a word over {a0, a, b, D} under one refinement step."""
    out = []
    for letter in word:
        if letter not in _RULES:
            raise ValueError(f"invalid letter {letter!r}")
        out.extend(_RULES[letter])
    return tuple(out)


def state_of_word(word) -> TripleState:
    try:
        return _STATE_OF_WORD[tuple(word)]
    except KeyError:
        raise ValueError(f"{word!r} is not a triple window") from None


def offspring_states(s: TripleState) -> tuple[TripleState, ...]:
    """Offspring windows of a state, derived from the substitution itself."""
    image = modified_substitute(s.word)
    return tuple(state_of_word(image[w:w + 3]) for w in WINDOWS[s])


def _table(p):
    p1, p2 = p
    rows = Mat3.from_rows
    plain_merge = rows(((p2, p1, 0), (0, p2, 0), (0, 0, p1)))
    return {
        (TripleState.S0, TripleState.S0): rows(((p1, 0, 0), (p2, 0, 0), (0, p1, 0))),
        (TripleState.S0, TripleState.S2): rows(((p2, 0, 0), (0, p1, 0), (0, p2, p1))),
        (TripleState.S1, TripleState.S2): rows(((p2, 0, 0), (0, p1, 0), (0, p2, p1))),
        (TripleState.S0, TripleState.H1): rows(((0, p1, 0), (0, p2, p1), (0, 0, p2))),
        (TripleState.S1, TripleState.H1): rows(((0, p1, 0), (0, p2, p1), (0, 0, p2))),
        (TripleState.H1, TripleState.H2): rows(((p2, 0, 0), (0, p1, 0), (0, p2, 0))),
        (TripleState.H1, TripleState.S1): rows(((0, p1, 0), (0, p2, 0), (0, 0, p2))),
        (TripleState.S2, TripleState.S1): plain_merge,
        (TripleState.H2, TripleState.S1): plain_merge,
        (TripleState.S3, TripleState.S1): plain_merge,
        (TripleState.S3, TripleState.S3): rows(((0, p2, 0), (0, 0, p1), (0, 0, p2))),
    }


def transition_matrix(s: TripleState, t: TripleState, p) -> Mat3:
    """Weight-transition matrix of the offspring edge s -> t."""
    p = normalize_pair(p)
    table = _table(p)
    if (s, t) not in table:
        raise NoEdgeError(f"{s.name} -> {t.name} is not an offspring edge")
    return table[(s, t)]


def check_offspring_edges() -> CheckResult:
    """Derived offspring edges must coincide with the matrix-table domain."""
    derived = set()
    for s in TripleState:
        kids = offspring_states(s)
        if len(set(kids)) != len(kids):
            return CheckResult(False, "offspring-edges", 0,
                               detail=f"duplicate offspring for {s.name}")
        derived.update((s, t) for t in kids)
    table = set(_table((Fraction(1, 2), Fraction(1, 2))))
    if derived != table:
        return CheckResult(False, "offspring-edges", 0,
                           detail=f"derived {len(derived)} edges, table {len(table)}")
    return CheckResult(True, "offspring-edges", 0)


def offspring_graph_text() -> str:
    """Plain-text adjacency of the offspring relation, one 'FROM TO' per line."""
    lines = []
    for s in TripleState:
        for t in offspring_states(s):
            lines.append(f"{s.name} {t.name}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# walking all triples

def _tokens(word: bytes) -> list[str]:
    toks = [{0: "D", 1: "a", 2: "b"}[x] for x in word]
    toks[0] = "a0"
    return toks


def root_triples(p) -> tuple[Level, list]:
    """The two rank-2 triples, weights read from the actual level."""
    field = make_field(2)
    lv = build_levels(field, p, 2)[-1]
    roots = [
        (0, TripleState.S0, lv.weight_triple(0)),
        (1, TripleState.S3, lv.weight_triple(1)),
    ]
    return lv, roots


def iter_triples(p, depth: int):
    """Yield (rank, index, state, weight_triple) for every triple, ranks 2..depth.

    Children are generated through the offspring windows, so each triple
    appears exactly once; the index bookkeeping lets callers line the walk
    up against fully built levels.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    p = normalize_pair(p)
    _, frontier = root_triples(p)
    yield from ((2, j, s, w) for j, s, w in frontier)
    for rank in range(2, depth):
        labels = level_word(rank, 2)
        prefix = [0] * (len(labels) + 1)
        for i, lab in enumerate(labels):
            prefix[i + 1] = prefix[i] + (lab != 2)
        nxt = []
        for j, s, w in frontier:
            base = j + prefix[j]
            for off, t in zip(WINDOWS[s], offspring_states(s)):
                nxt.append((base + off, t, transition_matrix(s, t, p).apply(w)))
        nxt.sort(key=lambda item: item[0])
        yield from ((rank + 1, j, s, w) for j, s, w in nxt)
        frontier = nxt


@dataclass(frozen=True)
class Path:
    """A maximal offspring chain from a rank-2 root to a rank-n triple."""

    states: tuple[TripleState, ...]
    weights: tuple               # weight triple at every rank along the path
    index: int                   # triple index at the final rank

    @property
    def final_weights(self):
        return self.weights[-1]


def enumerate_paths(p, depth: int) -> list[Path]:
    """All offspring paths from the rank-2 roots down to the given rank."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    p = normalize_pair(p)
    _, roots = root_triples(p)
    words = {rank: level_word(rank, 2) for rank in range(2, depth)}
    out = []

    def descend(rank, j, states, weights):
        if rank == depth:
            out.append(Path(tuple(states), tuple(weights), j))
            return
        labels = words[rank]
        base = j + sum(1 for lab in labels[:j] if lab != 2)
        s = states[-1]
        for off, t in zip(WINDOWS[s], offspring_states(s)):
            w = transition_matrix(s, t, p).apply(weights[-1])
            descend(rank + 1, base + off, states + [t], weights + [w])

    for j, s, w in roots:
        descend(2, j, [s], [w])
    return out


def check_paths_against_level(p, level: Level) -> CheckResult:
    """Walked triples must tile the level's triples exactly, index by index."""
    n = level.n
    toks = _tokens(level.labels)
    seen = {}
    for rank, j, s, w in iter_triples(p, n):
        if rank != n:
            continue
        if j in seen:
            return CheckResult(False, "path-level-consistency", n, j,
                               "two paths reached the same triple")
        seen[j] = (s, w)
    expected = level.num_points - 3
    if len(seen) != expected or set(seen) != set(range(expected)):
        return CheckResult(False, "path-level-consistency", n,
                           detail=f"{len(seen)} paths for {expected} triples")
    for j, (s, w) in seen.items():
        if tuple(toks[j:j + 3]) != s.word:
            return CheckResult(False, "path-level-consistency", n, j,
                               f"state {s.name} vs level window {toks[j:j + 3]}")
        if w != level.weight_triple(j):
            return CheckResult(False, "path-level-consistency", n, j,
                               "walked weights differ from the level")
    return CheckResult(True, "path-level-consistency", n)


# ---------------------------------------------------------------------------
# balance and divergence

def two_balanced(triple) -> bool:
    """Pair-sum ratio within [1/2, 2], exactly."""
    w1, w2, w3 = triple
    r = (w1 + w2) / (w2 + w3)
    return Fraction(1, 2) <= r <= 2


def shape_ok(state: TripleState, triple) -> bool:
    """Exact linear relations forced on H1/H2 triples at the symmetric pair.

    H1 triples look like (y, y+z, z)/2 and H2 triples like (x, y, y)/2, so
    the middle weight is the sum of the outer two, respectively equal to
    the last one.  Other states are unconstrained.
    """
    w1, w2, w3 = triple
    if state is TripleState.H1:
        return w2 == w1 + w3
    if state is TripleState.H2:
        return w2 == w3
    return True


def cycle_power_golden(p, k: int) -> Mat3:
    """Closed form of the k-th power of the S2->S1->S2 cycle matrix.

    The cycle matrix is ((p2^2, p1^2, 0), (0, p1p2, 0), (0, p1p2, p1^2));
    at the symmetric pair its k-th power is 4**-k times the unipotent
    matrix with k in the off-diagonal middle column.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p1, p2 = normalize_pair(p)
    top = sum(p1**i * p2 ** (2 * k - i) for i in range(2, k + 2))
    bot = sum(p1**i * p2 ** (2 * k - i) for i in range(k, 2 * k))
    return Mat3.from_rows(
        (
            (p2 ** (2 * k), top, 0),
            (0, p1**k * p2**k, 0),
            (0, bot, p1 ** (2 * k)),
        )
    )


def divergent_path_states(ell: int) -> list[TripleState]:
    """The path (S0 S2)(S1 S2)^(ell-1) S1 driving the asymmetric divergence."""
    states = [TripleState.S0, TripleState.S2]
    for _ in range(ell - 1):
        states += [TripleState.S1, TripleState.S2]
    states.append(TripleState.S1)
    return states


def path_ratio(p, ell: int) -> Fraction:
    """Exact pair-sum ratio at the end of the divergent path."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    p = normalize_pair(p)
    p1, p2 = p
    states = divergent_path_states(ell)
    w = (p1 * p1, p1 * p2, p1 * p2)
    for s, t in zip(states, states[1:]):
        w = transition_matrix(s, t, p).apply(w)
    return (w[0] + w[1]) / (w[1] + w[2])


def path_ratio_lower_bound(p, ell: int) -> Fraction:
    """(p2/p1)**(ell-1) / (ell+2), an exact lower bound for path_ratio."""
    p1, p2 = normalize_pair(p)
    return Fraction(1, ell + 2) * (p2 / p1) ** (ell - 1)


def divergence_certificate_golden(p, threshold) -> Certificate:
    """Certificate for an asymmetric pair: first ell whose bound clears the threshold."""
    p1, p2 = normalize_pair(p)
    if p1 == p2:
        raise ValueError("the symmetric pair admits no divergence certificate")
    reflected = p1 > p2
    if reflected:
        p1, p2 = p2, p1
    threshold = Fraction(threshold)
    ell = 1
    while path_ratio_lower_bound((p1, p2), ell) <= threshold:
        ell += 1
    ratio = path_ratio((p1, p2), ell)
    assert ratio >= path_ratio_lower_bound((p1, p2), ell)
    return Certificate("golden-path", ell, ratio, threshold, reflected, (p1, p2))


@dataclass(frozen=True)
class GoldenVerdict:
    """Outcome of the degree-2 analysis."""

    p: tuple[Fraction, Fraction]
    depth: int
    doubling_consistent: bool
    max_ratio: Fraction | None           # largest two-sided ratio over the walk
    shapes_ok: bool | None
    certificate: Certificate | None


def verdict_golden(p, depth: int, threshold=Fraction(1000)) -> GoldenVerdict:
    """Full degree-2 analysis.

    For the symmetric pair: walk every triple down to the given depth and
    verify 2-balance plus the H1/H2 shape relations; this is a finite
    verification, reported as consistency to that depth, never as a proof.
    For any other pair: produce an exact divergence certificate.
    """
    p = normalize_pair(p)
    if p[0] != p[1]:
        cert = divergence_certificate_golden(p, threshold)
        return GoldenVerdict(p, depth, False, None, None, cert)
    max_ratio = Fraction(0)
    balanced = True
    shapes = True
    for _, _, s, w in iter_triples(p, depth):
        r = (w[0] + w[1]) / (w[1] + w[2])
        two_sided = max(r, 1 / r)
        if two_sided > max_ratio:
            max_ratio = two_sided
        balanced = balanced and two_sided <= 2
        shapes = shapes and shape_ok(s, w)
    return GoldenVerdict(p, depth, balanced and shapes, max_ratio, shapes, None)
