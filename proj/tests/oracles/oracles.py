"""Independent reference values frozen into the unit tests.

Run with `python3 tests/oracles/oracles.py`. Uses only numpy and direct
enumeration; shares no code with the C++ library.
"""
import itertools
import math

import numpy as np


def exact_L(n):
    # sum over x, z, Y of |x^T Y z|; substituting Y_ij -> x_i Y_ij z_j gives
    # 2^{2n} sum_Y |sum_ij Y_ij| = 2^{2n} sum_k C(n^2, k) |n^2 - 2k|.
    m = n * n
    return 4**n * sum(math.comb(m, k) * abs(m - 2 * k) for k in range(m + 1))


def signs(bits, count):
    return np.array([-1 if (bits >> i) & 1 else 1 for i in range(count)])


def correlation_matrix(n):
    rows = []
    for a in range(4**n):
        x, z = signs(a, n), signs(a >> n, n)
        row = []
        for b in range(2 ** (n * n)):
            Y = signs(b, n * n).reshape(n, n)
            row.append(x @ Y @ z)
        rows.append(row)
    T = np.array(rows, dtype=float)
    return T / np.abs(T).sum()


def classical(T):
    R, S = T.shape
    best = -1.0
    for bits in range(2**R):
        a = signs(bits, R)
        best = max(best, np.abs(a @ T).sum())
    return best


def brute_tw(T, pattern, starter="alice"):
    """Enumerates every deterministic protocol, answers included."""
    if starter == "bob":
        return brute_tw(T.T.copy(), pattern)
    R, S = T.shape
    rounds = list(zip(pattern[0::2], pattern[1::2]))
    best = -1.0

    # Histories: Alice's round-i message depends on (x, n_<i), Bob's on (y, m_<=i).
    def run(x, y, fa, fb):
        ms, ns = [], []
        for i, (c, d) in enumerate(rounds):
            m = fa[i][(x,) + tuple(ns)]
            ms.append(m)
            nn = fb[i][(y,) + tuple(ms)]
            ns.append(nn)
        return tuple(ns), tuple(ms)

    def tables(side):
        # keys for each round
        keys = []
        for i, (c, d) in enumerate(rounds):
            if side == "a":
                hist = [range(2 ** rounds[j][1]) for j in range(i)]
                dom = list(itertools.product(range(R), *hist))
                keys.append((dom, 2**c))
            else:
                hist = [range(2 ** rounds[j][0]) for j in range(i + 1)]
                dom = list(itertools.product(range(S), *hist))
                keys.append((dom, 2**d))
        return keys

    ka, kb = tables("a"), tables("b")

    def all_funcs(keys):
        per_round = []
        for dom, alph in keys:
            per_round.append([dict(zip(dom, vals)) for vals in itertools.product(range(alph), repeat=len(dom))])
        return itertools.product(*per_round)

    for fa in all_funcs(ka):
        for fb in all_funcs(kb):
            # lifted matrix over u = (x, n-bar), v = (y, m-bar)
            us, vs, entries = {}, {}, []
            for x in range(R):
                for y in range(S):
                    nbar, mbar = run(x, y, fa, fb)
                    u = us.setdefault((x, nbar), len(us))
                    v = vs.setdefault((y, mbar), len(vs))
                    entries.append((u, v, T[x, y]))
            M = np.zeros((len(us), len(vs)))
            for u, v, t in entries:
                M[u, v] += t
            # full answer enumeration on both sides
            U, V = M.shape
            A = np.array([signs(b, U) for b in range(2**U)])
            B = np.array([signs(b, V) for b in range(2**V)])
            best = max(best, (A @ M @ B.T).max())
    return best


def khintchine_middle(alpha, p):
    n = len(alpha)
    vals = [abs(signs(b, n) @ alpha) ** p for b in range(2**n)]
    return (sum(vals) / 2**n) ** (1 / p)


def explicit_quantum(n):
    """Generic density-matrix evaluation of the explicit one-way protocol."""
    padded = 1
    while padded < n:
        padded *= 2
    total = 0.0
    L = exact_L(n)
    for a in range(4**n):
        x, z = signs(a, n), signs(a >> n, n)
        psi = np.zeros(2 * padded, dtype=complex)
        psi[:n] = x / math.sqrt(2 * n)
        psi[padded:padded + n] = z / math.sqrt(2 * n)
        rho = np.outer(psi, psi.conj())
        for b in range(2 ** (n * n)):
            Y = signs(b, n * n).reshape(n, n).astype(float)
            s = np.linalg.svd(Y, compute_uv=False)[0]
            Bm = np.zeros((2 * padded, 2 * padded), dtype=complex)
            Bm[:n, padded:padded + n] = Y / s
            Bm[padded:padded + n, :n] = Y.T / s
            total += (x @ Y @ z) / L * np.trace(rho @ Bm).real
    return total


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    for n in range(1, 5):
        print(f"exact_L({n}) = {exact_L(n)}")
    print("classical G1 =", repr(classical(correlation_matrix(1))))
    print("classical G2 =", repr(classical(correlation_matrix(2))))
    GA = np.array([[3, -1, 2], [-2, 4, 1], [1, 1, -5]], dtype=float)
    GA /= np.abs(GA).sum()
    GB = np.array([[1, 2], [-3, 1], [2, -2]], dtype=float)
    GB /= np.abs(GB).sum()
    GC = np.array([[2, -1], [1, 3]], dtype=float)
    GC /= np.abs(GC).sum()
    print("classical GA =", repr(classical(GA)))
    for name, G in (("GA", GA), ("GB", GB)):
        for pat in ((1, 0), (0, 1), (1, 1)):
            print(f"tw {name} {pat} alice =", repr(brute_tw(G, list(pat))))
        print(f"tw {name} (1, 0) bob =", repr(brute_tw(G, [1, 0], "bob")))
    GD = np.array([[3, -1, 2, -4], [-2, 4, 1, 1], [1, 1, -5, 2], [2, -3, -1, -1]], dtype=float)
    GD /= np.abs(GD).sum()
    print("classical GD =", repr(classical(GD)))
    for pat in ((1, 0), (0, 1), (1, 1)):
        print(f"tw GD {pat} alice =", repr(brute_tw(GD, list(pat))))
    print("tw GA (0,1,1,0) =", repr(brute_tw(GA, [0, 1, 1, 0])))
    print("tw GA (1,0,0,0) =", repr(brute_tw(GA, [1, 0, 0, 0])))
    print("tw GC (1,1,1,0) =", repr(brute_tw(GC, [1, 1, 1, 0])))
    print("tw GC (0,1,1,0) =", repr(brute_tw(GC, [0, 1, 1, 0])))
    print("khintchine (1,1) p=4 middle =", repr(khintchine_middle(np.array([1.0, 1.0]), 4)))
    print("khintchine (3,-1,2) p=3 middle =", repr(khintchine_middle(np.array([3.0, -1.0, 2.0]), 3)))
    print("khintchine (1,2,3,4) p=1 middle =", repr(khintchine_middle(np.array([1.0, 2.0, 3.0, 4.0]), 1)))
    b = lambda p: 1.0 if p <= 2 else math.sqrt(2 * math.e * p)
    print("b_4 =", repr(b(4)))
    tw = lambda n, k: 4 * math.sqrt(2) * math.e**2.5 * math.log2(k) ** 1.5 / n
    print("tw_upper_bound(1024,4) =", repr(tw(1024, 4)), " (64,4) =", repr(tw(64, 4)), " (2,4) =", repr(tw(2, 4)))
    for n in (1, 2, 3):
        print(f"explicit quantum n={n} =", repr(explicit_quantum(n)))
