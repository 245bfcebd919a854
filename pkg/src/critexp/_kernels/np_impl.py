"""Pure-numpy kernel implementations (fallback backend).

Same contracts and node-for-node identical search behaviour as the numba
backend: results, tie-breaks and visit counts must match exactly.

Exponents travel through these kernels as unreduced int64 pairs
``(num, den)`` meaning num/den; callers reduce at the API boundary.
All comparisons are integer cross-multiplications.  Word lengths are
capped so cross products stay far inside int64.
"""

from __future__ import annotations

import numpy as np

MAX_KERNEL_LENGTH = 1 << 24  # keeps L*den products < 2**48


def _check_length(n: int):
    if n > MAX_KERNEL_LENGTH:
        raise ValueError(f"word too long for exact int64 kernels: {n}")


def prefix_exponents(digits: np.ndarray):
    """Per-prefix critical exponents of one word.

    Returns int64 arrays (nums, dens) with nums[i]/dens[i] = E(digits[:i+1]).
    Scan maintains, for each period q, the longest suffix run with that
    period; the exponent is the running maximum of run/q (floored at 1).
    """
    n = int(digits.shape[0])
    _check_length(n)
    nums = np.ones(n, dtype=np.int64)
    dens = np.ones(n, dtype=np.int64)
    if n == 0:
        return nums, dens
    runs = np.arange(n + 1, dtype=np.int64)  # runs[q] = q until period q first applies
    qarr = np.arange(n + 1, dtype=np.int64)
    bn, bd = 1, 1
    for pos in range(1, n):
        a = digits[pos]
        window = runs[1 : pos + 1]
        eq = digits[pos - 1 :: -1] == a  # eq[q-1] <=> digits[pos-q] == a
        np.add(window, 1, out=window, where=eq)
        np.copyto(window, qarr[1 : pos + 1], where=~eq)
        improving = np.nonzero(window * bd > bn * qarr[1 : pos + 1])[0]
        for i in improving:
            q = int(i) + 1
            if int(window[i]) * bd > bn * q:
                bn, bd = int(window[i]), q
        nums[pos] = bn
        dens[pos] = bd
    return nums, dens


def exponent_batch(words: np.ndarray):
    """Critical exponents of many same-length words (rows of a 2-D array)."""
    count, length = words.shape
    _check_length(length)
    bn = np.ones(count, dtype=np.int64)
    bd = np.ones(count, dtype=np.int64)
    if length == 0:
        return np.zeros(count, dtype=np.int64), np.ones(count, dtype=np.int64)
    runs = np.tile(np.arange(length + 1, dtype=np.int64), (count, 1))
    for pos in range(1, length):
        a = words[:, pos]
        for q in range(1, pos + 1):
            col = runs[:, q]
            eq = words[:, pos - q] == a
            col[eq] += 1
            col[~eq] = q
            improving = col * bd > bn * q
            if improving.any():
                bn[improving] = col[improving]
                bd[improving] = q
    return bn, bd


def find_witness(digits: np.ndarray, num: int, den: int):
    """Locate a power witness (start, length, period) for exponent num/den.

    Tie-break contract: smallest start, then largest length, then smallest
    period.  num/den must be E(digits) in lowest terms, word nonempty.
    """
    n = int(digits.shape[0])
    for start in range(n):
        kmax = (n - start) // num
        for k in range(kmax, 0, -1):
            p = k * num
            q = k * den
            if np.array_equal(digits[start + q : start + p], digits[start : start + p - q]):
                return start, p, q
    return -1, -1, -1


def dfs_minima(base: np.ndarray, depth: int, prune: bool, node_budget: int):
    """Depth-first min of E(base + v) over v in {0,1}^j for every j <= depth.

    Children are visited 0 before 1; a node is cut as soon as its running
    exponent reaches the best full-depth leaf seen so far (sound because E
    never decreases under extension; ties are cut too, so the recorded
    minimizer is the lexicographically smallest).  Returns
    (level_nums, level_dens, minimizer, nodes, complete) where level j holds
    the exact minimum over length-j extensions and minimizer is the best
    full-depth extension.  node_budget <= 0 means unlimited.
    """
    m = int(base.shape[0])
    n = m + depth
    _check_length(n)
    word = np.zeros(n, dtype=np.uint8)
    word[:m] = base

    run_stack = np.tile(np.arange(n + 1, dtype=np.int64), (depth + 1, 1))
    qall = np.arange(n + 1, dtype=np.int64)

    # exponent of the base word, scanned in place into run_stack[0]
    bn, bd = (1, 1) if m > 0 else (0, 1)
    row = run_stack[0]
    for pos in range(1, m):
        a = word[pos]
        window = row[1 : pos + 1]
        eq = word[pos - 1 :: -1] == a
        np.add(window, 1, out=window, where=eq)
        np.copyto(window, qall[1 : pos + 1], where=~eq)
        improving = np.nonzero(window * bd > bn * qall[1 : pos + 1])[0]
        for i in improving:
            q = int(i) + 1
            if int(window[i]) * bd > bn * q:
                bn, bd = int(window[i]), q

    lvl_num = np.zeros(depth + 1, dtype=np.int64)
    lvl_den = np.zeros(depth + 1, dtype=np.int64)  # den 0 marks "unset"
    lvl_num[0], lvl_den[0] = bn, bd
    minimizer = np.zeros(depth, dtype=np.uint8)
    nodes = 0
    complete = True
    if depth == 0:
        return lvl_num, lvl_den, minimizer, nodes, complete

    e_num = np.zeros(depth + 1, dtype=np.int64)
    e_den = np.zeros(depth + 1, dtype=np.int64)
    e_num[0], e_den[0] = bn, bd
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
        en, ed = int(e_num[level]), int(e_den[level])
        if en < ed:  # a nonempty word has exponent at least 1
            en, ed = 1, 1
        if pos > 0:
            parent = run_stack[level]
            row = run_stack[level + 1]
            window = row[1 : pos + 1]
            np.copyto(window, parent[1 : pos + 1])
            eq = word[pos - 1 :: -1] == child
            np.add(window, 1, out=window, where=eq)
            np.copyto(window, qall[1 : pos + 1], where=~eq)
            improving = np.nonzero(window * ed > en * qall[1 : pos + 1])[0]
            for i in improving:
                q = int(i) + 1
                if int(window[i]) * ed > en * q:
                    en, ed = int(window[i]), q
        e_num[level + 1], e_den[level + 1] = en, ed

        j = level + 1
        if lvl_den[j] == 0 or en * lvl_den[j] < lvl_num[j] * ed:
            lvl_num[j], lvl_den[j] = en, ed
            if j == depth:
                minimizer[:] = word[m:]
        if j == depth:
            continue
        if prune and lvl_den[depth] != 0 and en * lvl_den[depth] >= lvl_num[depth] * ed:
            continue
        level += 1
        next_child[level] = 0

    return lvl_num, lvl_den, minimizer, nodes, complete


def warmup():
    """No compilation needed for the numpy backend."""
