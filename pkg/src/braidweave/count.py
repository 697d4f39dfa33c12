"""Stratification of braid varieties by simplifying weaves and exact point
counts over prime fields, with a brute-force oracle.

A word gamma with Demazure product w0 is stratified by branching at a doubled
letter (found after braid moves): the letter's variable is either invertible
(trivalent vertex, one letter shorter) or zero (cup, two letters shorter).
Each leaf reached at a reduced word for w0 contributes a stratum
C^a x (C*)^b, and the count polynomial is sum q^a (q-1)^b over leaves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .braid import (
    BraidWord,
    append_half_twist,
    demazure_mul,
    identity_perm,
    longest_perm,
)
from .weave import BudgetExceeded, find_doubled_letter


@dataclass
class StrataTree:
    """Binary branching record of one stratification."""

    letters: tuple[int, ...]
    status: str  # "branch", "leaf", "dead"
    cups: int = 0
    trivalent: int = 0
    invert_child: "StrataTree | None" = None
    vanish_child: "StrataTree | None" = None

    def leaves(self):
        if self.status == "leaf":
            yield (self.cups, self.trivalent)
        elif self.status == "branch":
            yield from self.invert_child.leaves()
            yield from self.vanish_child.leaves()

    def strata(self):
        """Multiset of (a, b) = (cups, trivalent) over live leaves."""
        out: dict[tuple[int, int], int] = {}
        for ab in self.leaves():
            out[ab] = out.get(ab, 0) + 1
        return out


@dataclass
class PointCountPolynomial:
    """sum_a n_a q^a (q-1)^{l - 2a}; kept as the strata multiset."""

    length: int  # l(gamma) - n(n-1)/2
    strata: dict[tuple[int, int], int]

    def eval(self, q: int) -> int:
        return sum(
            mult * q**a * (q - 1) ** b for (a, b), mult in self.strata.items()
        )

    def coefficients(self) -> list[int]:
        """Coefficients of the expanded polynomial in q, ascending."""
        import math

        size = self.length + 1
        out = [0] * size
        for (a, b), mult in self.strata.items():
            for i in range(b + 1):  # (q-1)^b = sum_i C(b,i) (-1)^(b-i) q^i
                out[a + i] += mult * math.comb(b, i) * (-1) ** (b - i)
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def render(self) -> str:
        if not self.strata:
            return "0"
        parts = []
        for (a, b), mult in sorted(self.strata.items()):
            factors = []
            if a == 1:
                factors.append("q")
            elif a > 1:
                factors.append(f"q^{a}")
            if b == 1:
                factors.append("(q-1)")
            elif b > 1:
                factors.append(f"(q-1)^{b}")
            body = "".join(factors) if factors else "1"
            parts.append(body if mult == 1 else f"{mult}{body}")
        return " + ".join(parts)


def stratify(word: BraidWord, move_budget: int = 64, rng: random.Random | None = None) -> StrataTree:
    """Stratification tree of X0(word; w0)."""
    n = word.n
    w0 = longest_perm(n)

    def dem(letters):
        p = identity_perm(n)
        for i in letters:
            p = demazure_mul(p, i)
        return p

    def rec(letters, cups, triv):
        if dem(letters) != w0:
            return StrataTree(letters, "dead", cups, triv)
        found = find_doubled_letter(letters, n, budget=move_budget, rng=rng)
        if found is None:
            # reduced with Demazure product w0: a point stratum
            return StrataTree(letters, "leaf", cups, triv)
        _, moved, p = found
        inv = rec(moved[:p] + moved[p + 1 :], cups, triv + 1)
        van = rec(moved[:p] + moved[p + 2 :], cups + 1, triv)
        return StrataTree(letters, "branch", cups, triv, inv, van)

    return rec(tuple(word.letters), 0, 0)


def point_count_polynomial(
    beta: BraidWord, rng: random.Random | None = None
) -> PointCountPolynomial:
    """The count polynomial of X0(beta Delta; w0) over F_q."""
    gamma = append_half_twist(beta)
    tree = stratify(gamma, rng=rng)
    return PointCountPolynomial(len(beta), tree.strata())


def brute_count(word: BraidWord, perm, q: int, budget: int = 10**8) -> int:
    """Exhaustive point count of the presentation over F_q (numpy batched)."""
    l = len(word)
    if q**l > budget:
        raise BudgetExceeded(f"{q}^{l} exceeds the budget")
    n = word.n
    count_pts = q**l
    # batched products: start from identity, multiply the elementary matrix
    # of each letter with its own coordinate digit
    mats = np.broadcast_to(np.eye(n, dtype=np.int64), (count_pts, n, n)).copy()
    for k, i in enumerate(word.letters):
        digits = (np.arange(count_pts) // q**k) % q
        cols = mats.copy()
        new_i = cols[:, :, i].copy()  # column i+1 (0-based i)
        new_ip1 = (cols[:, :, i - 1] + digits[:, None] * cols[:, :, i]) % q
        mats[:, :, i - 1] = new_i
        mats[:, :, i] = new_ip1
        mats %= q
    ok = np.ones(count_pts, dtype=bool)
    for a in range(1, n):
        for b in range(a):
            ok &= mats[:, a, perm[b]] % q == 0
    return int(ok.sum())


def brute_count_presentation(pres, q: int, budget: int = 10**8) -> int:
    """Exhaustive count of an arbitrary presentation (equations vanish,
    inequations invertible); used for augmentation presentations."""
    vars_ = list(pres.variables)
    l = len(vars_)
    if q**l > budget:
        raise BudgetExceeded(f"{q}^{l} exceeds the budget")
    total = 0
    point = dict.fromkeys(vars_, 0)
    for code in range(q**l):
        x = code
        for v in vars_:
            point[v] = x % q
            x //= q
        if any(eq.eval_int(point, q) != 0 for eq in pres.equations):
            continue
        if any(ineq.eval_int(point, q) == 0 for ineq in pres.inequations):
            continue
        total += 1
    return total
