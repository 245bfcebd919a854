"""Numba-jitted kernel implementations (default backend).

Behaviour must match np_impl exactly: same values, same tie-breaks, same
node counts.  Kernels release the GIL so search subtrees can run on threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_KERNEL_LENGTH = 1 << 24


def _check_length(n: int):
    if n > MAX_KERNEL_LENGTH:
        raise ValueError(f"word too long for exact int64 kernels: {n}")


@njit(cache=True, nogil=True)
def _prefix_exponents(digits):
    n = digits.shape[0]
    nums = np.ones(n, dtype=np.int64)
    dens = np.ones(n, dtype=np.int64)
    if n == 0:
        return nums, dens
    runs = np.empty(n + 1, dtype=np.int64)
    for q in range(n + 1):
        runs[q] = q
    bn = np.int64(1)
    bd = np.int64(1)
    for pos in range(1, n):
        a = digits[pos]
        for q in range(1, pos + 1):
            if digits[pos - q] == a:
                runs[q] += 1
            else:
                runs[q] = q
            if runs[q] * bd > bn * q:
                bn = runs[q]
                bd = np.int64(q)
        nums[pos] = bn
        dens[pos] = bd
    return nums, dens


def prefix_exponents(digits: np.ndarray):
    _check_length(int(digits.shape[0]))
    return _prefix_exponents(digits)


@njit(cache=True, nogil=True)
def _exponent_batch(words):
    count, length = words.shape
    bn = np.ones(count, dtype=np.int64)
    bd = np.ones(count, dtype=np.int64)
    if length == 0:
        return np.zeros(count, dtype=np.int64), np.ones(count, dtype=np.int64)
    runs = np.empty(length + 1, dtype=np.int64)
    for row in range(count):
        for q in range(length + 1):
            runs[q] = q
        en = np.int64(1)
        ed = np.int64(1)
        for pos in range(1, length):
            a = words[row, pos]
            for q in range(1, pos + 1):
                if words[row, pos - q] == a:
                    runs[q] += 1
                else:
                    runs[q] = q
                if runs[q] * ed > en * q:
                    en = runs[q]
                    ed = np.int64(q)
        bn[row] = en
        bd[row] = ed
    return bn, bd


def exponent_batch(words: np.ndarray):
    _check_length(int(words.shape[1]))
    return _exponent_batch(words)


@njit(cache=True, nogil=True)
def _find_witness(digits, num, den):
    n = digits.shape[0]
    for start in range(n):
        kmax = (n - start) // num
        for k in range(kmax, 0, -1):
            p = k * num
            q = k * den
            ok = True
            for i in range(start + q, start + p):
                if digits[i] != digits[i - q]:
                    ok = False
                    break
            if ok:
                return start, p, q
    return -1, -1, -1


def find_witness(digits: np.ndarray, num: int, den: int):
    return _find_witness(digits, num, den)


@njit(cache=True, nogil=True)
def _dfs_minima(base, depth, prune, node_budget):
    m = base.shape[0]
    n = m + depth
    word = np.zeros(n, dtype=np.uint8)
    word[:m] = base

    run_stack = np.empty((depth + 1, n + 1), dtype=np.int64)
    for lv in range(depth + 1):
        for q in range(n + 1):
            run_stack[lv, q] = q

    bn = np.int64(1) if m > 0 else np.int64(0)
    bd = np.int64(1)
    for pos in range(1, m):
        a = word[pos]
        for q in range(1, pos + 1):
            if word[pos - q] == a:
                run_stack[0, q] += 1
            else:
                run_stack[0, q] = q
            if run_stack[0, q] * bd > bn * q:
                bn = run_stack[0, q]
                bd = np.int64(q)

    lvl_num = np.zeros(depth + 1, dtype=np.int64)
    lvl_den = np.zeros(depth + 1, dtype=np.int64)
    lvl_num[0] = bn
    lvl_den[0] = bd
    minimizer = np.zeros(depth, dtype=np.uint8)
    nodes = np.int64(0)
    complete = True
    if depth == 0:
        return lvl_num, lvl_den, minimizer, nodes, complete

    e_num = np.zeros(depth + 1, dtype=np.int64)
    e_den = np.zeros(depth + 1, dtype=np.int64)
    e_num[0] = bn
    e_den[0] = bd
    next_child = np.zeros(depth + 1, dtype=np.int8)

    level = 0
    while level >= 0:
        child = next_child[level]
        if child > 1:
            level -= 1
            continue
        next_child[level] += 1
        nodes += 1
        if node_budget > 0 and nodes > node_budget:
            complete = False
            break
        pos = m + level
        word[pos] = child
        en = e_num[level]
        ed = e_den[level]
        if en < ed:  # a nonempty word has exponent at least 1
            en = np.int64(1)
            ed = np.int64(1)
        for q in range(1, pos + 1):
            if word[pos - q] == child:
                run_stack[level + 1, q] = run_stack[level, q] + 1
            else:
                run_stack[level + 1, q] = q
            if run_stack[level + 1, q] * ed > en * q:
                en = run_stack[level + 1, q]
                ed = np.int64(q)
        e_num[level + 1] = en
        e_den[level + 1] = ed

        j = level + 1
        if lvl_den[j] == 0 or en * lvl_den[j] < lvl_num[j] * ed:
            lvl_num[j] = en
            lvl_den[j] = ed
            if j == depth:
                for i in range(depth):
                    minimizer[i] = word[m + i]
        if j == depth:
            continue
        if prune and lvl_den[depth] != 0 and en * lvl_den[depth] >= lvl_num[depth] * ed:
            continue
        level += 1
        next_child[level] = 0

    return lvl_num, lvl_den, minimizer, nodes, complete


def dfs_minima(base: np.ndarray, depth: int, prune: bool, node_budget: int):
    _check_length(int(base.shape[0]) + depth)
    return _dfs_minima(base, depth, prune, np.int64(node_budget))


def warmup():
    """Trigger JIT compilation of every kernel on tiny inputs."""
    w = np.array([0, 1, 1, 0], dtype=np.uint8)
    prefix_exponents(w)
    exponent_batch(w.reshape(2, 2))
    find_witness(w, 2, 1)
    dfs_minima(w, 2, True, 0)
