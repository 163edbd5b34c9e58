"""One-mode projection of a user->book rating network.

Two users are tied when they rated at least one common book. The tie
weight aggregates the pair's ratings over all shared books:

``count_shared``     number of shared books
``sum_of_products``  sum of r(u, b) * r(v, b)   (default)
``sum_of_minima``    sum of min(r(u, b), r(v, b))

With ratings restricted to 6..10 the smallest possible product weight is
36, which is the minimum line value of the published user-user network.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _kernels
from .netcore import BipartiteNetwork, WeightedNetwork, USER, BOOK

RULES = {
    "count_shared": _kernels.RULE_COUNT,
    "sum_of_products": _kernels.RULE_PRODUCT,
    "sum_of_minima": _kernels.RULE_MIN,
}


@dataclass(frozen=True)
class ProjectionRule:
    side: Literal["user", "book"] = USER
    weight_rule: str = "sum_of_products"

    def __post_init__(self):
        if self.side not in (USER, BOOK):
            raise ValueError(f"side must be 'user' or 'book', not {self.side!r}")
        if self.weight_rule not in RULES:
            raise ValueError(f"unknown weight rule {self.weight_rule!r}; choose from {sorted(RULES)}")


def project(net: BipartiteNetwork, rule: ProjectionRule = ProjectionRule(), row_chunk: int = 512) -> WeightedNetwork:
    """Co-affiliation network over every vertex of ``rule.side``.

    Vertices without a partner stay in the result as isolates.
    """
    n_users = net.n_users
    if rule.weight_rule != "count_shared" and len(net.values) and net.values.min() < 1:
        raise ValueError("rating-valued projection rules need ratings >= 1")
    out_ptr, out_idx, out_val = net.out_csr
    in_ptr, in_idx, in_val = net.in_csr
    if rule.side == USER:
        # users -> books (book indices shifted to 0..n_books-1) -> users
        l_ptr = out_ptr[: n_users + 1]
        l_items = out_idx[: out_ptr[n_users]] - n_users
        l_vals = out_val[: out_ptr[n_users]]
        r_ptr = in_ptr[n_users:] - in_ptr[n_users]
        r_left, r_vals = in_idx, in_val
        labels = net.labels[:n_users]
    else:
        l_ptr = in_ptr[n_users:] - in_ptr[n_users]
        l_items, l_vals = in_idx, in_val
        r_ptr = out_ptr[: n_users + 1]
        r_left = out_idx[: out_ptr[n_users]] - n_users
        r_vals = out_val[: out_ptr[n_users]]
        labels = net.labels[n_users:]
    l_ptr, r_ptr = np.ascontiguousarray(l_ptr), np.ascontiguousarray(r_ptr)
    l_items, r_left = np.ascontiguousarray(l_items), np.ascontiguousarray(r_left)
    n = len(labels)
    if n == 0:
        z = np.zeros(0, np.int64)
        return WeightedNetwork((), z, z, z)

    counts = _kernels.project_count(l_ptr, l_items, r_ptr, r_left, row_chunk)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=ptr[1:])
    v, w = _kernels.project_fill(
        l_ptr, l_items, np.ascontiguousarray(l_vals), r_ptr, r_left,
        np.ascontiguousarray(r_vals), ptr, RULES[rule.weight_rule], row_chunk,
    )
    u = np.repeat(np.arange(n, dtype=np.int64), counts)
    return WeightedNetwork(labels, u, v, w)
