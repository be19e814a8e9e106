"""Independent oracles for the frozen reference values used in the unit tests.

Every generator here is built from scratch with numpy (no shared code with the
C++ library). Run it to regenerate the numbers quoted in tests/unit.
"""
import itertools
import math

import numpy as np


def compositions(sites, total):
    if sites == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(sites - 1, total - head):
            yield (head,) + rest


def complete_edges(n):
    return list(itertools.combinations(range(n), 2))


def gfact(g, k):
    return math.prod(g(i) for i in range(1, k + 1))


def weights(states, g):
    w = np.array([math.prod(1.0 / gfact(g, k) for k in s) for s in states])
    return w / w.sum()


def zero_range_matrix(states, edges, g, scale):
    idx = {s: i for i, s in enumerate(states)}
    L = np.zeros((len(states), len(states)))
    for i, s in enumerate(states):
        for x, y in edges:
            for a, b in ((x, y), (y, x)):
                if s[a] > 0:
                    t = list(s)
                    t[a] -= 1
                    t[b] += 1
                    r = scale * g(s[a])
                    L[i, idx[tuple(t)]] += r
                    L[i, i] -= r
    return L


def simple_average_matrix(states, edges, g, scale):
    # resample the pair from its conditional law given the pair total
    idx = {s: i for i, s in enumerate(states)}
    L = np.zeros((len(states), len(states)))
    for i, s in enumerate(states):
        for x, y in edges:
            tot = s[x] + s[y]
            law = np.array([1.0 / (gfact(g, k) * gfact(g, tot - k)) for k in range(tot + 1)])
            law /= law.sum()
            for k in range(tot + 1):
                t = list(s)
                t[x], t[y] = k, tot - k
                L[i, idx[tuple(t)]] += scale * law[k]
            L[i, i] -= scale
    return L


def gap_and_top(L, w):
    d = np.sqrt(w)
    S = (d[:, None] * L) / d[None, :]
    S = 0.5 * (S + S.T)
    ev = np.sort(np.linalg.eigvalsh(-S))
    return ev[1], ev[-1]


one = lambda k: 1.0
ident = lambda k: float(k)

print("zero-range complete V=3 omega=2 g=1: gap, top")
st = list(compositions(3, 2))
print(*gap_and_top(zero_range_matrix(st, complete_edges(3), one, 1 / 3), weights(st, one)))
print("zero-range complete V=3 omega=4 g=k: gap")
st = list(compositions(3, 4))
print(gap_and_top(zero_range_matrix(st, complete_edges(3), ident, 1 / 3), weights(st, ident))[0])
print("simple-average complete V=3 omega=2 g=1: gap")
st = list(compositions(3, 2))
print(gap_and_top(simple_average_matrix(st, complete_edges(3), one, 1 / 3), weights(st, one))[0])
print("simple-average lattice d=1 N=3 omega=3 g=k: gap")
st = list(compositions(3, 3))
print(gap_and_top(simple_average_matrix(st, [(0, 1), (1, 2)], ident, 1.0), weights(st, ident))[0])
print("zero-range two-site g=k omega=1..5: kappa")
for w in range(1, 6):
    st = list(compositions(2, w))
    print(w, gap_and_top(zero_range_matrix(st, [(0, 1)], ident, 0.5), weights(st, ident)))
print("zero-range two-site g=1 omega=1..6: gap")
for w in range(1, 7):
    st = list(compositions(2, w))
    print(w, gap_and_top(zero_range_matrix(st, [(0, 1)], one, 0.5), weights(st, one))[0])

print("kernel g=1 n=3 spectrum")
K = np.array([[0, 0, 1], [0, .5, .5], [1 / 3, 1 / 3, 1 / 3]])
print(np.sort(np.linalg.eigvals(K).real))

print("rho=(1+cos)/2pi symmetrized action on (2,0): coefficients of ei^2, ej^2, ei ej")
th = np.linspace(-np.pi, np.pi, 200001)[:-1]
rho = (1 + np.cos(th)) / (2 * np.pi)
sym = 0.5 * (rho + rho[::-1])
dth = th[1] - th[0]
c = lambda f: float(np.sum(f * sym) * dth)
print(c(np.cos(th) ** 2), c(np.sin(th) ** 2), c(-2 * np.cos(th) * np.sin(th)))
print("same density, (1,1): coefficients of ei^2, ej^2, ei ej")
# (ei c - ej s)(ei s + ej c) = ei^2 cs + ei ej (c^2 - s^2) - ej^2 sc
print(c(np.cos(th) * np.sin(th)), c(-np.sin(th) * np.cos(th)), c(np.cos(th) ** 2 - np.sin(th) ** 2))

print("sphere moment E[eta1^4], N=3, MC")
rng = np.random.default_rng(1)
x = rng.standard_normal((2_000_000, 3))
x /= np.linalg.norm(x, axis=1)[:, None]
print(np.mean(x[:, 0] ** 4), "exact", 3 / 15)
print("simplex E[eta1^2], N=3, gamma=1, MC")
e = rng.dirichlet([1, 1, 1], 2_000_000)
print(np.mean(e[:, 0] ** 2), "exact", 1 / 6)
print("Wallis: mean of cos^2 sin^2 over the circle", c(np.cos(th) ** 2 * np.sin(th) ** 2) if False else
      float(np.mean(np.cos(th) ** 2 * np.sin(th) ** 2)))

print("lsv scan g(k)=k+sin(k), k_max=1000")
g = lambda k: k + math.sin(k)
inc = max(abs(g(k + 1) - g(k)) for k in range(1, 1000))
gaps = []
for k0 in range(1, 6):
    gaps.append(min(g(k) - g(j) for j in range(1, 1001) for k in range(j + k0, 1001)))
print(inc, gaps)

print("path congestion d=1 N=3 edge (2,3) and d=2 N=4 max weighted")
def canon(x, y):
    p = [list(x)]
    cur = list(x)
    for i in range(len(x)):
        while cur[i] != y[i]:
            cur[i] += 1 if y[i] > cur[i] else -1
            p.append(list(cur))
    return p
for d, N in ((1, 3), (2, 4), (2, 3)):
    pts = list(itertools.product(range(1, N + 1), repeat=d))
    load, wt = {}, {}
    maxlen = 0
    for x in pts:
        for y in pts:
            p = canon(x, y)
            n = len(p) - 1
            maxlen = max(maxlen, n)
            for a, b in zip(p, p[1:]):
                e = tuple(sorted((tuple(a), tuple(b))))
                load[e] = load.get(e, 0) + 1
                wt[e] = wt.get(e, 0) + n
    print(d, N, "max length", maxlen, "max congestion", max(load.values()), "max weighted", max(wt.values()))

print("rho=(1+0.5cos 2t)/2pi, (2,0) and (0,2) and (1,1) actions: coefficients of ei^2, ej^2, ei ej")
rho = (1 + 0.5 * np.cos(2 * th)) / (2 * np.pi)
sym = 0.5 * (rho + rho[::-1])
c = lambda f: float(np.sum(f * sym) * dth)
C, S = np.cos(th), np.sin(th)
print((2, 0), c(C * C), c(S * S), c(-2 * C * S))
print((0, 2), c(S * S), c(C * C), c(2 * S * C))
print((1, 1), c(C * S), c(-S * C), c(C * C - S * S))
print("(4,0): ei^4, ej^4, ei^2 ej^2", c(C ** 4), c(S ** 4), c(6 * C * C * S * S))
