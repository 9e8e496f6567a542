"""Decision trees for sum-of-trees sampling with multivariate leaf vectors.

Axis-aligned binary trees whose terminal nodes carry p-dimensional mean
vectors. Splits route missing predictor values along a per-split
direction, so missingness itself is usable in the splitting rules.
Includes the depth-regularising tree prior, the closed-form marginal
likelihood of the residuals at a terminal node, the four
Metropolis-Hastings proposal moves (grow / prune / change / swap) with
their transition ratios, conjugate leaf-vector draws, and the split-usage
and split-interaction diagnostics.

Proposal bookkeeping: proposal grids are the unique observed values of a
predictor among the rows at the node, which matches the generative rule
prior, so grid factors cancel for grow/prune/change; the swap ratio keeps
the grid factors of every rule in the swapped subtree (and rejects swaps
whose cutpoints leave their new node's grid). Change is restricted to
internal nodes with two terminal children so its proposal stays exactly
symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernels import chol_spd

__all__ = [
    "TreePrior",
    "NodePriorParams",
    "Node",
    "DecisionTree",
    "Forest",
    "log_tree_prior",
    "node_log_marginal",
    "propose_tree",
    "mh_tree_update",
    "sample_node_params",
    "count_split_usage",
    "count_interactions",
    "sample_tree_from_prior",
]

MOVES = ("grow", "prune", "change", "swap")

FOREST_FORMAT_VERSION = 1


@dataclass
class TreePrior:
    """Depth-regularising prior: P(split at depth d) = alpha * (1+d)^-beta."""

    alpha: float = 0.95
    beta: float = 2.0
    move_probs: dict[str, float] = field(
        default_factory=lambda: {"grow": 0.25, "prune": 0.25, "change": 0.40, "swap": 0.10}
    )

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1 or self.beta < 0:
            raise ValueError("need 0 < alpha < 1 and beta >= 0")
        total = sum(self.move_probs.get(m, 0.0) for m in MOVES)
        if abs(total - 1.0) > 1e-12:
            raise ValueError("move probabilities must sum to 1")

    def split_prob(self, depth: int) -> float:
        return self.alpha * (1.0 + depth) ** (-self.beta)


@dataclass
class NodePriorParams:
    """Leaf-vector prior N_p(mu0, tau_mu^-1 I)."""

    tau_mu: float
    mu0: np.ndarray

    def __post_init__(self) -> None:
        if self.tau_mu <= 0:
            raise ValueError("tau_mu must be positive")
        self.mu0 = np.asarray(self.mu0, dtype=float)


class Node:
    """Internal split node or terminal node of a decision tree."""

    __slots__ = ("var", "cut", "miss_dir", "left", "right", "mu", "rows")

    def __init__(self) -> None:
        self.var: int = -1
        self.cut: float = np.nan
        self.miss_dir: str | None = None
        self.left: Node | None = None
        self.right: Node | None = None
        self.mu: np.ndarray | None = None
        self.rows: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def copy(self) -> "Node":
        out = Node()
        out.var = self.var
        out.cut = self.cut
        out.miss_dir = self.miss_dir
        out.mu = self.mu
        out.rows = self.rows
        if self.left is not None:
            out.left = self.left.copy()
            out.right = self.right.copy()
        return out


def _new_leaf(mu: np.ndarray, rows: np.ndarray) -> Node:
    node = Node()
    node.mu = mu
    node.rows = rows
    return node


def _split_rows(x_col: np.ndarray, rows: np.ndarray, cut: float, miss_dir: str | None):
    vals = x_col[rows]
    missing = np.isnan(vals)
    go_left = (vals <= cut) & ~missing
    if miss_dir == "left":
        go_left |= missing
    return rows[go_left], rows[~go_left]


class DecisionTree:
    """Binary regression tree over a fixed predictor matrix."""

    def __init__(self, root: Node):
        self.root = root

    @classmethod
    def stump(cls, n_rows: int, p: int) -> "DecisionTree":
        rows = np.arange(n_rows, dtype=np.intp)
        return cls(_new_leaf(np.zeros(p), rows))

    def copy(self) -> "DecisionTree":
        return DecisionTree(self.root.copy())

    # -- node walks ----------------------------------------------------
    def walk(self):
        """Yield (node, depth) in depth-first (pre-)order."""
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            yield node, depth
            if not node.is_leaf:
                stack.append((node.right, depth + 1))
                stack.append((node.left, depth + 1))

    def leaves(self) -> list[Node]:
        return [n for n, _ in self.walk() if n.is_leaf]

    def internal_nodes(self) -> list[Node]:
        return [n for n, _ in self.walk() if not n.is_leaf]

    def singly_internal(self) -> list[Node]:
        return [
            n
            for n, _ in self.walk()
            if not n.is_leaf and n.left.is_leaf and n.right.is_leaf
        ]

    def swappable_pairs(self) -> list[tuple[Node, Node]]:
        pairs = []
        for n, _ in self.walk():
            if n.is_leaf:
                continue
            for child in (n.left, n.right):
                if not child.is_leaf:
                    pairs.append((n, child))
        return pairs

    def n_leaves(self) -> int:
        return len(self.leaves())

    def max_depth(self) -> int:
        return max(d for _, d in self.walk())

    # -- data routing --------------------------------------------------
    def assign_rows(self, x: np.ndarray, rows: np.ndarray | None = None) -> bool:
        """Recompute the training rows at every leaf; True if none empty."""
        if rows is None:
            rows = np.arange(x.shape[0], dtype=np.intp)
        ok = True
        stack = [(self.root, rows)]
        while stack:
            node, r = stack.pop()
            node.rows = r
            if node.is_leaf:
                ok &= r.size > 0
            else:
                lrows, rrows = _split_rows(x[:, node.var], r, node.cut, node.miss_dir)
                stack.append((node.left, lrows))
                stack.append((node.right, rrows))
        return ok

    def route(self, x_row: np.ndarray) -> int:
        """Terminal-node id (depth-first leaf index) for one predictor row."""
        node = self.root
        while not node.is_leaf:
            v = x_row[node.var]
            if np.isnan(v):
                node = node.left if node.miss_dir == "left" else node.right
            else:
                node = node.left if v <= node.cut else node.right
        leaf_id = 0
        for n, _ in self.walk():
            if n.is_leaf:
                if n is node:
                    return leaf_id
                leaf_id += 1
        raise AssertionError("unreachable")

    def route_leaf(self, x_row: np.ndarray) -> Node:
        node = self.root
        while not node.is_leaf:
            v = x_row[node.var]
            if np.isnan(v):
                node = node.left if node.miss_dir == "left" else node.right
            else:
                node = node.left if v <= node.cut else node.right
        return node

    def predict(self, x: np.ndarray, p: int) -> np.ndarray:
        """Sum-free single-tree fit: (n, p) matrix of routed leaf vectors."""
        out = np.zeros((x.shape[0], p))
        stack = [(self.root, np.arange(x.shape[0], dtype=np.intp))]
        while stack:
            node, r = stack.pop()
            if r.size == 0:
                continue
            if node.is_leaf:
                out[r] = node.mu
            else:
                lrows, rrows = _split_rows(x[:, node.var], r, node.cut, node.miss_dir)
                stack.append((node.left, lrows))
                stack.append((node.right, rrows))
        return out

    def fitted_from_rows(self, n_rows: int, p: int) -> np.ndarray:
        """Training fit using the cached leaf row assignments."""
        out = np.zeros((n_rows, p))
        for leaf in self.leaves():
            out[leaf.rows] = leaf.mu
        return out

    # -- serialization ---------------------------------------------------
    def to_list(self) -> list:
        nodes = []
        for node, _ in self.walk():
            if node.is_leaf:
                nodes.append({"mu": [float(v) for v in node.mu]})
            else:
                nodes.append(
                    {"var": int(node.var), "cut": float(node.cut), "miss": node.miss_dir}
                )
        return nodes

    @classmethod
    def from_list(cls, nodes: list) -> "DecisionTree":
        it = iter(nodes)

        def build() -> Node:
            spec = next(it)
            node = Node()
            if "mu" in spec:
                node.mu = np.asarray(spec["mu"], dtype=float)
            else:
                node.var = int(spec["var"])
                node.cut = float(spec["cut"])
                node.miss_dir = spec["miss"]
                node.left = build()
                node.right = build()
            return node

        tree = cls(build())
        try:
            next(it)
        except StopIteration:
            return tree
        raise ValueError("trailing nodes in serialized tree")


@dataclass
class Forest:
    """Ordered tree ensemble sharing one predictor schema and response dim."""

    trees: list[DecisionTree]
    n_predictors: int
    p: int
    missable: np.ndarray  # bool per predictor column

    @classmethod
    def stumps(cls, n_trees: int, n_rows: int, n_predictors: int, p: int,
               missable: np.ndarray | None = None) -> "Forest":
        if missable is None:
            missable = np.zeros(n_predictors, dtype=bool)
        trees = [DecisionTree.stump(n_rows, p) for _ in range(n_trees)]
        return cls(trees, n_predictors, p, np.asarray(missable, dtype=bool))

    def predict(self, x: np.ndarray) -> np.ndarray:
        if x.shape[1] != self.n_predictors:
            raise ValueError("predictor schema mismatch")
        out = np.zeros((x.shape[0], self.p))
        for tree in self.trees:
            out += tree.predict(x, self.p)
        return out

    def fitted_from_rows(self, n_rows: int) -> np.ndarray:
        out = np.zeros((n_rows, self.p))
        for tree in self.trees:
            out += tree.fitted_from_rows(n_rows, self.p)
        return out

    def to_dict(self) -> dict:
        return {
            "version": FOREST_FORMAT_VERSION,
            "n_predictors": self.n_predictors,
            "p": self.p,
            "missable": [bool(b) for b in self.missable],
            "trees": [t.to_list() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Forest":
        if data.get("version") != FOREST_FORMAT_VERSION:
            raise ValueError(f"unsupported forest format version: {data.get('version')}")
        trees = [DecisionTree.from_list(t) for t in data["trees"]]
        return cls(trees, int(data["n_predictors"]), int(data["p"]),
                   np.asarray(data["missable"], dtype=bool))


# -- prior and marginal likelihood --------------------------------------


def log_tree_prior(tree: DecisionTree, prior: TreePrior) -> float:
    """Log depth-regularising prior of the tree topology."""
    total = 0.0
    for node, depth in tree.walk():
        s = prior.split_prob(depth)
        total += np.log(s) if not node.is_leaf else np.log1p(-s)
    return float(total)


def node_log_marginal(
    residuals: np.ndarray, omega: np.ndarray, node_prior: NodePriorParams
) -> float:
    """Log marginal of the residual rows at one terminal node.

    Integrates the leaf vector out of a N_p(mu, omega^-1) likelihood under
    the N_p(mu0, tau_mu^-1 I) leaf prior, in closed form.
    """
    residuals = np.atleast_2d(np.asarray(residuals, dtype=float))
    n_l, p = residuals.shape
    if n_l < 1:
        raise ValueError("terminal node must contain at least one row")
    tau = node_prior.tau_mu
    mu0 = node_prior.mu0
    chol_om = chol_spd(omega)
    logdet_om = 2.0 * np.log(np.diag(chol_om)).sum()
    s = residuals.sum(axis=0)
    quad = float(np.einsum("ij,jk,ik->", residuals, omega, residuals))
    prec_r = n_l * omega + tau * np.eye(p)
    chol_r = chol_spd(prec_r)
    logdet_prec_r = 2.0 * np.log(np.diag(chol_r)).sum()
    b = omega @ s + tau * mu0
    w = np.linalg.solve(chol_r, b)
    quad_mu_r = float(w @ w)  # mu_r' Sigma_r^-1 mu_r
    return float(
        -0.5 * n_l * p * np.log(2.0 * np.pi)
        + 0.5 * p * np.log(tau)
        + 0.5 * n_l * logdet_om
        - 0.5 * logdet_prec_r
        - 0.5 * (tau * float(mu0 @ mu0) - quad_mu_r + quad)
    )


def _leaf_stats(tree: DecisionTree, resid: np.ndarray):
    leaves = tree.leaves()
    counts = np.array([leaf.rows.size for leaf in leaves])
    sums = np.stack([resid[leaf.rows].sum(axis=0) for leaf in leaves])
    return counts, sums


def _partition_score(
    counts: np.ndarray,
    sums: np.ndarray,
    omega: np.ndarray,
    logdet_omega: float,
    node_prior: NodePriorParams,
) -> float:
    """Sum of per-leaf log marginals minus partition-independent constants.

    Drops the (2*pi)^(-n p / 2) factor and the residual quadratic form,
    both of which are identical for any partition of the same residual
    rows, so differences of scores equal differences of exact marginals.
    """
    tau = node_prior.tau_mu
    mu0 = node_prior.mu0
    p = omega.shape[0]
    total = 0.0
    eye = np.eye(p)
    mu0_quad = tau * float(mu0 @ mu0)
    for n_l, s in zip(counts, sums):
        prec_r = n_l * omega + tau * eye
        chol_r = chol_spd(prec_r)
        b = omega @ s + tau * mu0
        w = np.linalg.solve(chol_r, b)
        total += (
            0.5 * p * np.log(tau)
            + 0.5 * n_l * logdet_omega
            - np.log(np.diag(chol_r)).sum()
            - 0.5 * (mu0_quad - float(w @ w))
        )
    return float(total)


def tree_log_marginal(tree: DecisionTree, resid: np.ndarray, omega: np.ndarray,
                      node_prior: NodePriorParams) -> float:
    """Exact sum of node_log_marginal over the tree's terminal nodes."""
    return float(
        sum(node_log_marginal(resid[leaf.rows], omega, node_prior) for leaf in tree.leaves())
    )


# -- proposal moves ------------------------------------------------------


@dataclass
class Proposal:
    tree: DecisionTree | None
    log_move_ratio: float
    kind: str
    noop: bool = False
    valid: bool = True


def _node_grid(x: np.ndarray, rows: np.ndarray, var: int) -> np.ndarray:
    vals = x[rows, var]
    return np.unique(vals[~np.isnan(vals)])


def _draw_rule(x, rows, missable, rng):
    var = int(rng.integers(x.shape[1]))
    grid = _node_grid(x, rows, var)
    if grid.size == 0:
        return None
    cut = float(grid[rng.integers(grid.size)])
    miss_dir = ("left", "right")[rng.integers(2)] if missable[var] else None
    return var, cut, miss_dir, grid.size


def _propose_grow(tree, x, missable, prior, rng) -> Proposal:
    new = tree.copy()
    leaves = new.leaves()
    node = leaves[int(rng.integers(len(leaves)))]
    rule = _draw_rule(x, node.rows, missable, rng)
    if rule is None:
        return Proposal(None, 0.0, "grow", valid=False)
    var, cut, miss_dir, _ = rule
    lrows, rrows = _split_rows(x[:, var], node.rows, cut, miss_dir)
    if lrows.size == 0 or rrows.size == 0:
        return Proposal(None, 0.0, "grow", valid=False)
    node.var, node.cut, node.miss_dir = var, cut, miss_dir
    node.left = _new_leaf(node.mu, lrows)
    node.right = _new_leaf(node.mu, rrows)
    node.mu = None
    log_ratio = (
        np.log(prior.move_probs["prune"])
        - np.log(len(new.singly_internal()))
        - np.log(prior.move_probs["grow"])
        + np.log(len(leaves))
    )
    return Proposal(new, float(log_ratio), "grow")


def _propose_prune(tree, prior, rng) -> Proposal:
    candidates_old = tree.singly_internal()
    if not candidates_old:
        return Proposal(None, 0.0, "prune", noop=True)
    new = tree.copy()
    candidates = new.singly_internal()
    node = candidates[int(rng.integers(len(candidates)))]
    rows = np.concatenate([node.left.rows, node.right.rows])
    mu = node.left.mu
    node.var, node.cut, node.miss_dir = -1, np.nan, None
    node.left = node.right = None
    node.mu = mu
    node.rows = rows
    log_ratio = (
        np.log(prior.move_probs["grow"])
        - np.log(new.n_leaves())
        - np.log(prior.move_probs["prune"])
        + np.log(len(candidates))
    )
    return Proposal(new, float(log_ratio), "prune")


def _propose_change(tree, x, missable, rng) -> Proposal:
    if not tree.singly_internal():
        return Proposal(None, 0.0, "change", noop=True)
    new = tree.copy()
    candidates = new.singly_internal()
    node = candidates[int(rng.integers(len(candidates)))]
    rows = np.concatenate([node.left.rows, node.right.rows])
    rule = _draw_rule(x, rows, missable, rng)
    if rule is None:
        return Proposal(None, 0.0, "change", valid=False)
    var, cut, miss_dir, _ = rule
    lrows, rrows = _split_rows(x[:, var], rows, cut, miss_dir)
    if lrows.size == 0 or rrows.size == 0:
        return Proposal(None, 0.0, "change", valid=False)
    node.var, node.cut, node.miss_dir = var, cut, miss_dir
    node.left.rows, node.right.rows = lrows, rrows
    return Proposal(new, 0.0, "change")


def _subtree_rule_log_grid(node: Node, x: np.ndarray) -> float | None:
    """Sum of log grid sizes over internal nodes below (and incl.) node.

    Returns None when some cutpoint is absent from its node's grid or a
    leaf ends up empty, i.e. the configuration has zero prior mass.
    """
    total = 0.0
    stack = [node]
    while stack:
        nd = stack.pop()
        if nd.is_leaf:
            if nd.rows.size == 0:
                return None
            continue
        grid = _node_grid(x, nd.rows, nd.var)
        if grid.size == 0 or not np.any(grid == nd.cut):
            return None
        total += np.log(grid.size)
        stack.append(nd.left)
        stack.append(nd.right)
    return total


def _reassign_subtree(node: Node, x: np.ndarray) -> None:
    stack = [(node, node.rows)]
    while stack:
        nd, rows = stack.pop()
        nd.rows = rows
        if not nd.is_leaf:
            lrows, rrows = _split_rows(x[:, nd.var], rows, nd.cut, nd.miss_dir)
            stack.append((nd.left, lrows))
            stack.append((nd.right, rrows))


def _propose_swap(tree, x, rng) -> Proposal:
    pairs_old = tree.swappable_pairs()
    if not pairs_old:
        return Proposal(None, 0.0, "swap", noop=True)
    new = tree.copy()
    pairs = new.swappable_pairs()
    parent, child = pairs[int(rng.integers(len(pairs)))]
    old_grid_sum = _subtree_rule_log_grid(parent, x)
    if old_grid_sum is None:
        # current rules drifted off their grids (mutable predictors);
        # fall back to a grid-neutral ratio on the old side
        old_grid_sum = 0.0
        neutral = True
    else:
        neutral = False
    parent.var, child.var = child.var, parent.var
    parent.cut, child.cut = child.cut, parent.cut
    parent.miss_dir, child.miss_dir = child.miss_dir, parent.miss_dir
    _reassign_subtree(parent, x)
    new_grid_sum = _subtree_rule_log_grid(parent, x)
    if new_grid_sum is None:
        return Proposal(None, 0.0, "swap", valid=False)
    log_ratio = 0.0 if neutral else old_grid_sum - new_grid_sum
    return Proposal(new, float(log_ratio), "swap")


def propose_tree(
    tree: DecisionTree,
    move: str,
    x: np.ndarray,
    missable: np.ndarray,
    prior: TreePrior,
    rng: np.random.Generator,
) -> Proposal:
    """One structural proposal; noop when the move is illegal on the topology."""
    if move == "grow":
        return _propose_grow(tree, x, missable, prior, rng)
    if move == "prune":
        return _propose_prune(tree, prior, rng)
    if move == "change":
        return _propose_change(tree, x, missable, rng)
    if move == "swap":
        return _propose_swap(tree, x, rng)
    raise ValueError(f"unknown move: {move}")


def mh_tree_update(
    tree: DecisionTree,
    x: np.ndarray,
    resid: np.ndarray,
    omega: np.ndarray,
    tree_prior: TreePrior,
    node_prior: NodePriorParams,
    rng: np.random.Generator,
    missable: np.ndarray | None = None,
    use_likelihood: bool = True,
) -> tuple[DecisionTree, bool, str]:
    """One Metropolis-Hastings pass on a single tree.

    ``resid`` must be the partial residuals of the response with every
    other tree's fit subtracted. Returns (tree, accepted, move).
    """
    if missable is None:
        missable = np.zeros(x.shape[1], dtype=bool)
    probs = np.array([tree_prior.move_probs[m] for m in MOVES])
    move = MOVES[int(rng.choice(len(MOVES), p=probs))]
    proposal = propose_tree(tree, move, x, missable, tree_prior, rng)
    if proposal.noop or not proposal.valid:
        return tree, False, move
    log_a = (
        log_tree_prior(proposal.tree, tree_prior)
        - log_tree_prior(tree, tree_prior)
        + proposal.log_move_ratio
    )
    if use_likelihood:
        chol_om = chol_spd(omega)
        logdet_om = 2.0 * np.log(np.diag(chol_om)).sum()
        c_new, s_new = _leaf_stats(proposal.tree, resid)
        c_old, s_old = _leaf_stats(tree, resid)
        log_a += _partition_score(c_new, s_new, omega, logdet_om, node_prior)
        log_a -= _partition_score(c_old, s_old, omega, logdet_om, node_prior)
    if np.log(rng.random()) < log_a:
        return proposal.tree, True, move
    return tree, False, move


def sample_node_params(
    tree: DecisionTree,
    resid: np.ndarray,
    omega: np.ndarray,
    node_prior: NodePriorParams,
    rng: np.random.Generator,
) -> None:
    """Conjugate leaf-vector draws, in place, for every terminal node."""
    p = omega.shape[0]
    tau = node_prior.tau_mu
    eye = np.eye(p)
    for leaf in tree.leaves():
        n_l = leaf.rows.size
        assert n_l > 0, "empty terminal node reached leaf sampling"
        prec = n_l * omega + tau * eye
        chol_prec = chol_spd(prec)
        b = omega @ resid[leaf.rows].sum(axis=0) + tau * node_prior.mu0
        mean = np.linalg.solve(prec, b)
        z = np.linalg.solve(chol_prec.T, rng.standard_normal(p))
        leaf.mu = mean + z


# -- diagnostics ---------------------------------------------------------


def split_counts(forest: Forest) -> np.ndarray:
    """Number of splitting rules using each predictor, over all trees."""
    counts = np.zeros(forest.n_predictors)
    for tree in forest.trees:
        for node, _ in tree.walk():
            if not node.is_leaf:
                counts[node.var] += 1
    return counts


def count_split_usage(forest_draws) -> np.ndarray:
    """Average per-predictor split usage over stored forest draws."""
    draws = list(forest_draws)
    if not draws:
        raise ValueError("need at least one stored draw")
    return np.mean([split_counts(f) for f in draws], axis=0)


def interaction_counts(forest: Forest) -> np.ndarray:
    """Symmetric matrix counting parent-child split-variable pairs."""
    q = forest.n_predictors
    counts = np.zeros((q, q))
    for tree in forest.trees:
        stack = [tree.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            for child in (node.left, node.right):
                if not child.is_leaf:
                    counts[node.var, child.var] += 1
                    if node.var != child.var:
                        counts[child.var, node.var] += 1
                stack.append(child)
    return counts


def count_interactions(forest_draws) -> np.ndarray:
    """Average split-variable interaction matrix over stored forest draws."""
    draws = list(forest_draws)
    if not draws:
        raise ValueError("need at least one stored draw")
    return np.mean([interaction_counts(f) for f in draws], axis=0)


# -- generative-prior simulation (validation + synthetic data) -----------


def sample_tree_from_prior(
    x: np.ndarray,
    p: int,
    prior: TreePrior,
    missable: np.ndarray,
    rng: np.random.Generator,
    max_tries: int = 200,
) -> DecisionTree:
    """Draw a tree from the generative prior, rejecting empty-leaf trees."""
    n = x.shape[0]
    for _ in range(max_tries):
        tree = DecisionTree.stump(n, p)
        ok = _grow_prior_node(tree.root, 0, x, missable, prior, rng)
        if ok:
            return tree
    raise RuntimeError("could not draw a prior tree without empty leaves")


def _grow_prior_node(node, depth, x, missable, prior, rng, max_depth: int = 12) -> bool:
    if depth >= max_depth or rng.random() >= prior.split_prob(depth):
        return node.rows.size > 0
    rule = _draw_rule(x, node.rows, missable, rng)
    if rule is None:
        return False
    var, cut, miss_dir, _ = rule
    lrows, rrows = _split_rows(x[:, var], node.rows, cut, miss_dir)
    if lrows.size == 0 or rrows.size == 0:
        return False
    node.var, node.cut, node.miss_dir = var, cut, miss_dir
    node.left = _new_leaf(node.mu, lrows)
    node.right = _new_leaf(node.mu, rrows)
    node.mu = None
    return _grow_prior_node(node.left, depth + 1, x, missable, prior, rng) and _grow_prior_node(
        node.right, depth + 1, x, missable, prior, rng
    )
