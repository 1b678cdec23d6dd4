"""Finite zigzag martingale pairs, their terminal laminate measures and
weak-type lower-bound certificates via Young inversion.

A zigzag pair (F', G') moves one planar coordinate per step.  It encodes a
pair (F, G) = (F' + G', F' - G') in which G is a +-1 transform of F; the
terminal law, pushed onto diagonal matrices diag(x, y), is a laminate with
barycenter 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

_MARTINGALE_TOL = 1e-12


class ZigzagError(ValueError):
    pass


@dataclass
class ZigzagNode:
    pos: tuple[float, float]
    axis: str | None = None          # None for leaves
    children: list[tuple[float, float, "ZigzagNode"]] = field(default_factory=list)
    # children entries: (probability, displacement along axis, child node)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def validate(self):
        if self.is_leaf:
            return
        if self.axis not in (HORIZONTAL, VERTICAL):
            raise ZigzagError(f"bad move axis {self.axis!r}")
        total = 0.0
        drift = 0.0
        for prob, disp, child in self.children:
            if prob <= 0:
                raise ZigzagError("child probabilities must be > 0")
            total += prob
            drift += prob * disp
            expected = (
                (self.pos[0] + disp, self.pos[1])
                if self.axis == HORIZONTAL
                else (self.pos[0], self.pos[1] + disp)
            )
            if abs(child.pos[0] - expected[0]) > 1e-12 or abs(child.pos[1] - expected[1]) > 1e-12:
                raise ZigzagError("child position inconsistent with displacement")
            child.validate()
        if abs(total - 1.0) > _MARTINGALE_TOL:
            raise ZigzagError(f"child probabilities sum to {total}, not 1")
        if abs(drift) > _MARTINGALE_TOL:
            raise ZigzagError(f"conditional mean displacement {drift} is not 0")


@dataclass
class ZigzagTree:
    root: ZigzagNode

    def __post_init__(self):
        if self.root.pos != (0.0, 0.0):
            raise ZigzagError("root must sit at (0, 0)")
        self.root.validate()

    def leaves(self) -> list[tuple[float, float, float]]:
        """(weight, x, y) over terminal positions."""
        out: list[tuple[float, float, float]] = []

        def walk(node: ZigzagNode, w: float):
            if node.is_leaf:
                out.append((w, node.pos[0], node.pos[1]))
                return
            for prob, _, child in node.children:
                walk(child, w * prob)

        walk(self.root, 1.0)
        return out

    def depth(self) -> int:
        def walk(node: ZigzagNode) -> int:
            if node.is_leaf:
                return 0
            return 1 + max(walk(c) for _, _, c in node.children)

        return walk(self.root)

    def level_positions(self, k: int) -> list[tuple[float, float, float]]:
        """(weight, x, y) of the pair stopped at depth k; leaves persist."""
        out: list[tuple[float, float, float]] = []

        def walk(node: ZigzagNode, w: float, d: int):
            if node.is_leaf or d == k:
                out.append((w, node.pos[0], node.pos[1]))
                return
            for prob, _, child in node.children:
                walk(child, w * prob, d + 1)

        walk(self.root, 1.0, 0)
        return out


@dataclass
class LaminateMeasure:
    """Finitely supported measure on diagonal 2x2 matrices diag(x, y)."""

    atoms: list[tuple[float, float, float]]

    def __post_init__(self):
        total = sum(w for w, _, _ in self.atoms)
        if abs(total - 1.0) > 1e-9:
            raise ZigzagError(f"atom weights sum to {total}, not 1")

    def barycenter(self) -> tuple[float, float]:
        bx = sum(w * x for w, x, _ in self.atoms)
        by = sum(w * y for w, _, y in self.atoms)
        return (bx, by)

    @classmethod
    def from_tree(cls, tree: ZigzagTree) -> "LaminateMeasure":
        return cls(tree.leaves())


# ---------------------------------------------------------------------------
# construction from a +-1-transform pair

@dataclass
class TransformNode:
    """Martingale tree of F-increments: children are (probability, F step, subtree)."""

    children: list[tuple[float, float, "TransformNode"]] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


def from_transform_pair(increments: TransformNode, signs: list[int]) -> ZigzagTree:
    """Build the zigzag pair ((F+G)/2, (F-G)/2) from F-steps and per-depth signs.

    Sign +1 at a depth makes the G-step equal the F-step, so the pair moves
    horizontally by the F-step; sign -1 moves it vertically.
    """
    for s in signs:
        if s not in (-1, 1):
            raise ZigzagError(f"signs must be +-1, got {s}")

    def build(node: TransformNode, pos: tuple[float, float], depth: int) -> ZigzagNode:
        if node.is_leaf:
            return ZigzagNode(pos)
        if depth >= len(signs):
            raise ZigzagError("signs list shorter than tree depth")
        s = signs[depth]
        axis = HORIZONTAL if s == 1 else VERTICAL
        total = 0.0
        drift = 0.0
        children = []
        for prob, step, sub in node.children:
            if prob <= 0:
                raise ZigzagError("child probabilities must be > 0")
            total += prob
            drift += prob * step
            npos = (pos[0] + step, pos[1]) if s == 1 else (pos[0], pos[1] + step)
            children.append((prob, step, build(sub, npos, depth + 1)))
        if abs(total - 1.0) > _MARTINGALE_TOL or abs(drift) > _MARTINGALE_TOL:
            raise ZigzagError("F-increments are not a martingale tree")
        return ZigzagNode(pos, axis, children)

    return ZigzagTree(build(increments, (0.0, 0.0), 0))


def to_fg_atoms(tree: ZigzagTree) -> list[tuple[float, float, float]]:
    """(weight, F_infty, G_infty) recovered by the inverse rotation."""
    return [(w, x + y, x - y) for w, x, y in tree.leaves()]


# ---------------------------------------------------------------------------
# functionals

def eval_gap(tree: ZigzagTree, lam: float, theta) -> float:
    """E(|G_infty| - lam)_+ - E Theta(|F_infty|) by exact leaf enumeration."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    gain = 0.0
    cost = 0.0
    for w, fv, gv in to_fg_atoms(tree):
        gain += w * max(abs(gv) - lam, 0.0)
        cost += w * theta(abs(fv))
    return gain - cost


def verify_biconvex_monotone(tree: ZigzagTree, zeta) -> bool:
    """E zeta(F'_k, G'_k) is nondecreasing in the depth k, within 1e-12."""
    values = []
    for k in range(tree.depth() + 1):
        values.append(sum(w * zeta(x, y) for w, x, y in tree.level_positions(k)))
    scale = 1.0 + max(abs(v) for v in values)
    ok = all(values[k + 1] >= values[k] - 1e-12 * scale for k in range(len(values) - 1))
    return ok and values[-1] >= zeta(0.0, 0.0) - 1e-12 * scale


def invert_young(p: float, lam: float) -> float:
    """Lower bound on the weak-type constant implied by a gap at level lam:
    (p-1) c^{p/(p-1)} / p^{p/(p-1)} >= lam  =>  c >= (lam p^{p/(p-1)}/(p-1))^{(p-1)/p}."""
    if lam <= 0:
        return 0.0
    r = p / (p - 1.0)
    return (lam * p**r / (p - 1.0)) ** (1.0 / r)


def critical_lambda(tree: ZigzagTree, p: float) -> float:
    """Largest lam with E(|G|-lam)_+ >= E|F|^p (the zero of the gap)."""
    return _best_lambda_score(to_fg_atoms(tree), p)


class CertificateRefused(ValueError):
    pass


def certify_weak_type_lower(p: float, tree: ZigzagTree, epsilon: float) -> float:
    """Certified lower bound on c_p from the largest gap-positive level of the tree.

    Admissible only when the gap at lam - epsilon verifies strictly positive
    by exact enumeration; refuses otherwise.
    """
    if not (1.0 < p < 2.0):
        raise ValueError(f"certificate branch requires 1 < p < 2, got {p}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    lam = critical_lambda(tree, p)
    target = lam - epsilon
    if target <= 0:
        return 0.0
    if eval_gap(tree, target, lambda t: t**p) <= 0:
        raise CertificateRefused(
            f"gap at lambda - epsilon = {target} is not positive"
        )
    return invert_young(p, target)


# ---------------------------------------------------------------------------
# rank-one convexity spot checks

def psi_offdiag_abs(a11: float, a22: float) -> float:
    """psi(A) = |A11 - A22| on diagonal matrices; rank-one convex."""
    return abs(a11 - a22)


def psi_det_affine(c: float):
    """psi(A) = c * det A + affine part; rank-one affine, hence rank-one convex."""

    def psi(a11: float, a22: float) -> float:
        return c * a11 * a22 + a11 - a22

    return psi


def rank_one_convexity_spot_check(measure: LaminateMeasure, psi) -> bool:
    """int psi dnu >= psi(barycenter), for psi given on diagonal matrices."""
    bx, by = measure.barycenter()
    integral = sum(w * psi(x, y) for w, x, y in measure.atoms)
    scale = 1.0 + abs(integral)
    return integral >= psi(bx, by) - 1e-12 * scale


# ---------------------------------------------------------------------------
# beam search for gap-positive witnesses

def _best_lambda_score(atoms: list[tuple[float, float, float]], p: float) -> float:
    """Zero of lam -> E(|G|-lam)_+ - E|F|^p, solved exactly on the
    piecewise-linear gain function; 0 when the gap is never positive."""
    cost = sum(w * abs(f) ** p for w, f, _ in atoms)
    wg = sorted(((abs(g), w) for w, _, g in atoms), reverse=True)
    if not wg or wg[0][0] <= 0:
        return 0.0
    if sum(w * g for g, w in wg) <= cost:  # gain(0) <= cost
        return 0.0
    cw = 0.0
    cwg = 0.0
    for k, (g, w) in enumerate(wg):
        cw += w
        cwg += w * g
        lower = wg[k + 1][0] if k + 1 < len(wg) else 0.0
        lam = (cwg - cost) / cw
        if lam >= lower:
            return max(lam, 0.0)
    return 0.0


def search_gap_tree(
    p: float,
    depth: int = 8,
    quant: int = 8,
    step_range: float = 4.0,
    beam: int = 24,
) -> ZigzagTree:
    """Beam search over zigzag chains for a tree with a positive weak-type gap.

    States are chains in which each node splits into a stopping branch and a
    continuing branch over quantized displacements j/quant, axes alternating
    with the continuing branch's depth.  Deterministic tie-breaking by the
    encoded step sequence.
    """
    steps = [j / quant for j in range(1, int(quant * step_range) + 1)]

    # state: (active (F,G) point, active weight, stopped atoms, step history)
    start = ((0.0, 0.0), 1.0, (), ())
    frontier = [start]
    best_hist: tuple | None = None
    best_lam = 0.0

    def close(state):
        active, w, atoms, _ = state
        return list(atoms) + [(w, active[0], active[1])]

    for d in range(depth):
        sign = 1 if d % 2 == 0 else -1  # alternate transform signs
        candidates = []
        for active, w, atoms, hist in frontier:
            fa, ga = active
            for u in steps:
                for v in steps:
                    # martingale split of F: +u with prob v/(u+v), -v otherwise
                    q = v / (u + v)
                    cont = (fa + u, ga + sign * u)
                    stop = (fa - v, ga - sign * v)
                    nstate = (
                        cont,
                        w * q,
                        atoms + ((w * (1.0 - q), stop[0], stop[1]),),
                        hist + ((u, v),),
                    )
                    lam = _best_lambda_score(close(nstate), p)
                    candidates.append((lam, nstate[3], nstate))
        candidates.sort(key=lambda c: (-c[0], c[1]))
        frontier = [c[2] for c in candidates[:beam]]
        if candidates and candidates[0][0] > best_lam:
            best_lam = candidates[0][0]
            best_hist = candidates[0][1]

    if best_hist is None or best_lam <= 0:
        raise CertificateRefused("no gap-positive tree found in the search budget")
    return chain_tree(best_hist)


def chain_tree(history) -> ZigzagTree:
    """Zigzag chain from (u, v) step pairs: at depth d the pair moves along the
    alternating axis by +u (continue, prob v/(u+v)) or by -v (stop)."""
    increments = TransformNode()
    tip = increments
    for u, v in history:
        q = v / (u + v)
        cont = TransformNode()
        tip.children = [(q, u, cont), (1.0 - q, -v, TransformNode())]
        tip = cont
    signs = [1 if d % 2 == 0 else -1 for d in range(len(tuple(history)))]
    return from_transform_pair(increments, signs)


# ---------------------------------------------------------------------------
# JSON tree files

def tree_to_json(tree: ZigzagTree) -> str:
    def enc(node: ZigzagNode):
        d = {"pos": list(node.pos)}
        if not node.is_leaf:
            d["axis"] = node.axis
            d["children"] = [
                {"p": p, "d": disp, "node": enc(child)} for p, disp, child in node.children
            ]
        return d

    return json.dumps({"root": enc(tree.root)}, indent=2)


def tree_from_json(text: str) -> ZigzagTree:
    raw = json.loads(text)

    def dec(d) -> ZigzagNode:
        pos = (float(d["pos"][0]), float(d["pos"][1]))
        if "children" not in d:
            return ZigzagNode(pos)
        children = [
            (float(c["p"]), float(c["d"]), dec(c["node"])) for c in d["children"]
        ]
        return ZigzagNode(pos, d["axis"], children)

    return ZigzagTree(dec(raw["root"]))
