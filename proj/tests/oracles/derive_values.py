"""Independent scalar oracles for the frozen expected values in the C++ tests.

Evaluated with mpmath at 40 digits; nothing here imports the library.
Run: python3 tests/oracles/derive_values.py
"""
from mpmath import mp, mpf, exp, sqrt, coth

mp.dps = 40

b, l, g, sig = mpf("0.001"), mpf("0.001"), mpf("0.1"), mpf("0.1")
k5 = 2 * g - b


def show(name, value):
    print(f"{name:40s} {mp.nstr(value, 17)}")


# performance
show("performance penalty example", mpf("0.5") + mpf("0.5") * (20 - g * mpf("0.5")) - mpf("0.01"))

# drift vertex and grid search
show("drift vertex value", k5 ** 2 / (4 * l))
best = max(((-l * v * v + k5 * v), v) for v in [mpf(i) / 100 for i in range(0, 20001)])
show("grid argmax v (step 0.01)", best[1])

# Euler step
v, dt = mpf("99.5"), mpf("1e-4")
show("step q'", 1 - v * dt)
show("step s'", mpf("1.1") - b * v * dt)
show("step x'", (mpf("1.1") - l * v) * v * dt)

# strategies
show("p1 gain baseline", k5 / (2 * l))
show("p1 gain sec5", (2 * g) / (2 * mpf("0.0001")))
show("p1 inventory t=0.02", exp(-k5 / (2 * l) * mpf("0.02")))
show("p1 inventory t=0.1", exp(-k5 / (2 * l) * mpf("0.1")))
T = mpf(1)
show("p0 rate t=0", k5 / (2 * l + k5 * T))
q0T = 2 * l / (2 * l + k5 * T)
show("p0 inventory t=T", q0T)
show("p0 inventory t=0.5", (2 * l + k5 * mpf("0.5")) / (2 * l + k5 * T))
show("p0 rate t=T with q=Q*(T)", k5 / (2 * l) * q0T)

ls, phi = mpf("0.0001"), mpf("0.001")
G = sqrt(phi / ls)
zeta = (g + sqrt(ls * phi)) / (g - sqrt(ls * phi))
show("AC Gamma", G)
show("AC zeta", zeta)
show("AC rate t=T q=1", G * (zeta + 1) / (zeta - 1))
show("AC inventory t=T", (zeta - 1) / (zeta * exp(G) - exp(-G)))


def ac_q(t):
    return (zeta * exp(G * (T - t)) - exp(-G * (T - t))) / (zeta * exp(G * T) - exp(-G * T))


show("AC -dQ/dt at 0 (analytic diff)", -mp.diff(ac_q, 0))
show("AC rate at 0", G * (zeta * exp(G) + exp(-G)) / (zeta * exp(G) - exp(-G)))

# closed form
show("lambda p1 baseline", k5 ** 2 / (2 * l * sig ** 2))
show("lambda p1 sigma x10", k5 ** 2 / (2 * l * (10 * sig) ** 2))
show("lambda p1 sigma x100", k5 ** 2 / (2 * l * (100 * sig) ** 2))
show("lambda p1prime sec5", ((2 * g) ** 2 - 4 * ls * phi) / (2 * ls * sig ** 2))
lam, kk, hh = mpf("1.98"), mpf("0.95"), mpf("1.05")
show("J(1.0) lambda=1.98", (exp(-lam * (1 - kk)) - 1) / (exp(-lam * (hh - kk)) - 1))
for lam in (mpf("1.98"), mpf("19.80"), mpf("1980.05")):
    show(f"J(1.0) lambda={lam}", (exp(-lam * (1 - kk)) - 1) / (exp(-lam * (hh - kk)) - 1))


def h2(t, b=b, l=l, g=g, T=T):
    return -1 / ((T - t) / l + 2 / (2 * g - b)) - b / 2


show("h2(0) baseline", h2(0))
show("gain from h2(0)", -(b + 2 * h2(0)) / (2 * l))
show("p0 value t=0 x=0 q=1 s=1.1", mpf("1.1") + h2(0))
show("printed h2(T) (b/2-2g?)", 1 / (0 + 1 / (-2 * g + b)) - b / 2)

# P1 noiseless drift integral: Y_inf - Y0 = (2g-b)^2/(4l) * int_0^inf exp(-2 c t) dt
c = k5 / (2 * l)
show("P1 noiseless Y_inf", 1 + k5 ** 2 / (4 * l) / (2 * c))
show("P1 noiseless Y(1)", 1 + k5 ** 2 / (4 * l) * (1 - exp(-2 * c)) / (2 * c))


# surrogate two-barrier formula
def surrogate(mu, s, y, k, h):
    if mu == 0:
        return (y - k) / (h - k)
    a = 2 * mu / s ** 2
    return (exp(-a * y) - exp(-a * k)) / (exp(-a * h) - exp(-a * k))


for mu, s in ((mpf(0), mpf("0.2")), (mpf("0.5"), mpf("0.2")), (mpf("-0.3"), mpf("0.25"))):
    show(f"surrogate mu={mu} s={s}", surrogate(mu, s, mpf(1), mpf("0.95"), mpf("1.05")))
