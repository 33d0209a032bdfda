"""Regular-grid discretization of the profile space, its triangulation, and
the labelling machinery used to locate near-fixed-points of the improvement
map.

The strategy space is a product of simplices; restricting every coordinate
to integer multiples of 1/d gives the grid.  The triangulation is built
from a block-diagonal displacement matrix Q: within one (player, state)
block the column for action k carries -1 at row k and +1 at row
(k + 1) mod A, so every column preserves the per-(player, state) sum.  A
simplex is determined by a base grid point, an admissible index set T of
coordinate triples (at least one action per (player, state) stays out of
T), and an ordering of T; successive vertices differ by one Q column.

Grid points are labelled by the coordinate triple that achieves the global
minimum displacement of the improvement map, restricted to coordinates
with positive probability (lexicographic tie-break).  A simplex whose
distinct vertex labels cover all actions of some (player, state) is a
stopping simplex; every profile in it has residual at most
A_max^2 * (lambda + 1) / d.

Path-following over the triangulation is an extension point; the search
here is deterministic exhaustive enumeration, intended for desk-scale
instances only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb
from typing import Iterator, NamedTuple

import numpy as np

from .game import StochasticGame, StrategyProfile, validate_profile
from .nash_map import apply_f, lipschitz_constant, residual

GRID_ENUM_GUARD = 10**7
_LABEL_TIE_TOL = 1e-12


class Label(NamedTuple):
    """A coordinate triple; doubles as a vertex label.  Lexicographic order
    is (player, state, action)."""

    player: int
    state: int
    action: int


class InvalidSimplexError(ValueError):
    """A simplex description leaves the grid or is otherwise malformed."""


@dataclass(frozen=True, eq=False)
class GridProfile:
    """A grid point: integer numerators over d for every (player, state)."""

    numerators: tuple[np.ndarray, ...]

    def __eq__(self, other):
        if not isinstance(other, GridProfile):
            return NotImplemented
        return self.d == other.d and self.flat_key() == other.flat_key()

    def __hash__(self):
        return hash((self.d, self.flat_key()))
    d: int

    def flat_key(self) -> tuple[int, ...]:
        """Flattened numerators in (player, state, action) order; the grid's
        lexicographic ordering key."""
        return tuple(int(x) for arr in self.numerators for x in arr.ravel())

    def to_profile(self, game: StochasticGame) -> StrategyProfile:
        return validate_profile(
            game, [arr.astype(float) / self.d for arr in self.numerators]
        )

    def shifted(self, delta: tuple[np.ndarray, ...]) -> "GridProfile":
        return GridProfile(
            tuple(arr + dlt for arr, dlt in zip(self.numerators, delta)), self.d
        )

    def is_valid(self) -> bool:
        return all(np.all(arr >= 0) for arr in self.numerators)


@dataclass(frozen=True)
class GridSimplex:
    """Simplex of the triangulation: base point, admissible index set T
    (kept sorted), and the vertex ordering ``order`` (a permutation of T)."""

    base: GridProfile
    index_set: tuple[Label, ...]
    order: tuple[Label, ...]

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def dimension(self) -> int:
        return len(self.index_set)


@dataclass(frozen=True)
class SimplexClass:
    """Classification of a simplex from its vertex labels."""

    kind: str  # "incomplete" | "completely-labelled" | "stopping"
    labels: tuple[Label, ...]
    stopping_player: int | None = None
    stopping_state: int | None = None


@dataclass(frozen=True)
class StoppingReport:
    bound: float
    vertex_residuals: tuple[float, ...]
    passed: bool


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer compositions in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def grid_point_count(game: StochasticGame, d: int) -> int:
    count = 1
    for a in game.num_actions:
        count *= comb(d + a - 1, a - 1) ** game.num_states
    return count


def grid_points(game: StochasticGame, d: int) -> Iterator[GridProfile]:
    """All grid profiles, lexicographic in the flattened numerators."""
    if d < 1:
        raise ValueError("grid size d must be >= 1")
    per_cell = []
    for i in range(game.num_players):
        for _ in range(game.num_states):
            per_cell.append(list(_compositions(d, game.num_actions[i])))
    for combo in product(*per_cell):
        nums = []
        k = 0
        for i in range(game.num_players):
            rows = np.array(combo[k : k + game.num_states], dtype=int)
            nums.append(rows)
            k += game.num_states
        yield GridProfile(tuple(nums), d)


def q_column(game: StochasticGame, coord: Label) -> tuple[np.ndarray, ...]:
    """Displacement of one Q column on the numerators: -1 at the coordinate's
    action, +1 at the cyclically next action in the same (player, state)."""
    i, s, a = coord
    if not (0 <= i < game.num_players and 0 <= s < game.num_states):
        raise IndexError(f"invalid coordinate {coord}")
    a_count = game.num_actions[i]
    if not 0 <= a < a_count:
        raise IndexError(f"invalid coordinate {coord}")
    delta = tuple(
        np.zeros((game.num_states, game.num_actions[j]), dtype=int)
        for j in range(game.num_players)
    )
    delta[i][s, a] -= 1
    delta[i][s, (a + 1) % a_count] += 1
    return delta


def label_point(game: StochasticGame, point: GridProfile) -> Label:
    """Label of a grid point.

    The label is the lexicographically least coordinate with positive
    probability whose displacement f(pi) - pi attains the global minimum
    over all coordinates.  A positive-probability coordinate always
    qualifies: zero-probability coordinates have nonnegative displacement
    and each (player, state) block of displacements sums to zero.
    """
    pi = point.to_profile(game)
    fp = apply_f(game, pi)
    disp = [fp.probs[i] - pi.probs[i] for i in range(game.num_players)]
    global_min = min(float(dm.min()) for dm in disp)
    for i in range(game.num_players):
        for s in range(game.num_states):
            for a in range(game.num_actions[i]):
                if pi.probs[i][s, a] > 0 and disp[i][s, a] <= global_min + _LABEL_TIE_TOL:
                    return Label(i, s, a)
    raise AssertionError("labelling rule found no eligible coordinate")  # pragma: no cover


def simplex_vertices(game: StochasticGame, sigma: GridSimplex) -> list[GridProfile]:
    """Vertices w^0 .. w^|T| obtained by applying the ordered Q columns."""
    if sorted(sigma.order) != sorted(sigma.index_set):
        raise InvalidSimplexError("ordering is not a permutation of the index set")
    if not _admissible_index_set(game, sigma.index_set):
        raise InvalidSimplexError(
            "index set must omit at least one action per (player, state)"
        )
    vertices = [sigma.base]
    current = sigma.base
    for coord in sigma.order:
        current = current.shifted(q_column(game, coord))
        if not current.is_valid():
            raise InvalidSimplexError(
                f"vertex after column {tuple(coord)} leaves the grid"
            )
        vertices.append(current)
    return vertices


def _admissible_index_set(game: StochasticGame, index_set) -> bool:
    for i in range(game.num_players):
        for s in range(game.num_states):
            block = sum(1 for c in index_set if c[0] == i and c[1] == s)
            if block >= game.num_actions[i]:
                return False
    return True


def classify_simplex(
    game: StochasticGame, sigma: GridSimplex, _label_cache: dict | None = None
) -> SimplexClass:
    """Classify by vertex labels: duplicated labels mean incomplete; distinct
    labels covering every action of some (player, state) mean stopping."""
    labels = tuple(
        _cached_label(game, v, _label_cache) for v in simplex_vertices(game, sigma)
    )
    if len(set(labels)) != len(labels):
        return SimplexClass("incomplete", labels)
    for i in range(game.num_players):
        for s in range(game.num_states):
            covered = {lab.action for lab in labels if lab.player == i and lab.state == s}
            if len(covered) == game.num_actions[i]:
                return SimplexClass("stopping", labels, i, s)
    return SimplexClass("completely-labelled", labels)


def _cached_label(game, point: GridProfile, cache: dict | None) -> Label:
    if cache is None:
        return label_point(game, point)
    key = point.flat_key()
    if key not in cache:
        cache[key] = label_point(game, point)
    return cache[key]


def index_sets(game: StochasticGame) -> list[tuple[Label, ...]]:
    """All admissible index sets, ordered by size then lexicographically."""
    per_cell = []
    for i in range(game.num_players):
        for s in range(game.num_states):
            coords = [Label(i, s, a) for a in range(game.num_actions[i])]
            subsets = []
            for k in range(len(coords)):  # proper subsets only
                subsets.extend(combinations(coords, k))
            per_cell.append(subsets)
    sets = []
    for combo in product(*per_cell):
        merged = tuple(sorted(c for part in combo for c in part))
        sets.append(merged)
    sets.sort(key=lambda t: (len(t), t))
    return sets


def starting_point(game: StochasticGame, d: int) -> GridProfile:
    """Grid point nearest the uniform profile in max norm, lexicographic
    tie-break.  Serves as the cone apex v^0 of the triangulated regions."""
    nums = []
    for i in range(game.num_players):
        a_count = game.num_actions[i]
        rows = []
        for _ in range(game.num_states):
            best = None
            best_dist = None
            for comp in _compositions(d, a_count):
                dist = max(abs(y / d - 1.0 / a_count) for y in comp)
                if best_dist is None or dist < best_dist - 1e-15:
                    best, best_dist = comp, dist
            rows.append(best)
        nums.append(np.array(rows, dtype=int))
    return GridProfile(tuple(nums), d)


def _flat(game: StochasticGame, point: GridProfile) -> np.ndarray:
    return np.concatenate([arr.ravel() for arr in point.numerators]).astype(float)


def in_cone(
    game: StochasticGame, point: GridProfile, apex: GridProfile, index_set
) -> bool:
    """Whether ``point`` lies in the cone of Q columns of the index set rooted
    at ``apex`` with nonnegative coefficients.  The selected columns are
    linearly independent (each block omits a column), so least squares
    decides membership."""
    diff = _flat(game, point) - _flat(game, apex)
    if not index_set:
        return bool(np.all(diff == 0))
    cols = np.column_stack(
        [_flat_delta(game, q_column(game, c)) for c in index_set]
    )
    lam, _, _, _ = np.linalg.lstsq(cols, diff, rcond=None)
    if np.any(lam < -1e-9):
        return False
    return bool(np.allclose(cols @ lam, diff, atol=1e-9))


def _flat_delta(game: StochasticGame, delta) -> np.ndarray:
    return np.concatenate([arr.ravel() for arr in delta]).astype(float)


def enumerate_simplices(
    game: StochasticGame, d: int, restrict_to_cones: bool = True
) -> Iterator[GridSimplex]:
    """All candidate simplices in deterministic order: base point
    lexicographic, then index-set size ascending, then index set and vertex
    ordering lexicographic.  Invalid candidates (a vertex off the grid) are
    skipped.  With ``restrict_to_cones`` only simplices inside the cone
    region of their index set (rooted at the starting point) are yielded,
    matching the triangulation's region structure."""
    apex = starting_point(game, d)
    sets = index_sets(game)
    for base in grid_points(game, d):
        for t_set in sets:
            if restrict_to_cones and not in_cone(game, base, apex, t_set):
                continue
            for order in permutations(t_set):
                sigma = GridSimplex(base, t_set, order)
                try:
                    simplex_vertices(game, sigma)
                except InvalidSimplexError:
                    continue
                yield sigma


def find_stopping_simplex(
    game: StochasticGame, d: int
) -> tuple[GridSimplex, SimplexClass] | None:
    """Deterministic exhaustive search for a stopping simplex.

    Returns the first stopping simplex in enumeration order together with
    its classification, or None if the triangulation contains none.
    """
    count = grid_point_count(game, d)
    if count > GRID_ENUM_GUARD:
        raise ValueError(
            f"grid has {count} points, above the exhaustive-search guard "
            f"{GRID_ENUM_GUARD}"
        )
    cache: dict = {}
    for sigma in enumerate_simplices(game, d):
        cls = classify_simplex(game, sigma, cache)
        if cls.kind == "stopping":
            return sigma, cls
    return None


def stopping_residual_check(
    game: StochasticGame, sigma: GridSimplex, d: int
) -> StoppingReport:
    """Check every vertex of a stopping simplex against the residual bound
    A_max^2 * (lambda + 1) / d."""
    cls = classify_simplex(game, sigma)
    if cls.kind != "stopping":
        raise InvalidSimplexError(f"simplex is {cls.kind}, not stopping")
    if sigma.d != d:
        raise InvalidSimplexError("simplex grid size does not match d")
    bound = game.a_max**2 * (lipschitz_constant(game) + 1.0) / d
    residuals = tuple(
        residual(game, v.to_profile(game)) for v in simplex_vertices(game, sigma)
    )
    return StoppingReport(bound, residuals, all(r <= bound + 1e-8 for r in residuals))


# ---------------------------------------------------------------------------
# Round-trippable serialization used by the command-line tools.

def simplex_to_dict(game: StochasticGame, sigma: GridSimplex) -> dict:
    perm = [sigma.index_set.index(c) for c in sigma.order]
    return {
        "d": sigma.d,
        "base": [arr.tolist() for arr in sigma.base.numerators],
        "index_set": [list(c) for c in sigma.index_set],
        "permutation": perm,
        "vertex_labels": [
            list(_cached_label(game, v, None))
            for v in simplex_vertices(game, sigma)
        ],
    }


def simplex_from_dict(game: StochasticGame, data: dict) -> GridSimplex:
    try:
        d = int(data["d"])
        base = grid_profile_from_lists(game, data["base"], d)
        index_set = tuple(Label(*map(int, c)) for c in data["index_set"])
        perm = [int(k) for k in data["permutation"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSimplexError(f"malformed simplex document: {exc}") from exc
    if sorted(perm) != list(range(len(index_set))):
        raise InvalidSimplexError("permutation must reorder the index set")
    order = tuple(index_set[k] for k in perm)
    sigma = GridSimplex(base, tuple(sorted(index_set)), order)
    simplex_vertices(game, sigma)  # validates
    return sigma


def grid_profile_from_lists(game: StochasticGame, rows, d: int) -> GridProfile:
    if d < 1:
        raise InvalidSimplexError("grid size d must be >= 1")
    if len(rows) != game.num_players:
        raise InvalidSimplexError("numerators must list every player")
    nums = []
    for i, player_rows in enumerate(rows):
        arr = np.array(player_rows, dtype=int)
        if arr.shape != (game.num_states, game.num_actions[i]):
            raise InvalidSimplexError(
                f"player {i} numerators have shape {arr.shape}"
            )
        if np.any(arr < 0) or np.any(arr.sum(axis=1) != d):
            raise InvalidSimplexError(
                f"player {i} numerators are not a grid point of size {d}"
            )
        nums.append(arr)
    return GridProfile(tuple(nums), d)
