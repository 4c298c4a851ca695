"""Regenerates ../oracles.hpp with mpmath (50 digits), independent of the C++ code.

    python3 tests/oracles/generate.py > tests/oracles.hpp
"""
import mpmath as mp

mp.mp.dps = 50

RHOS = [mp.mpf("0.05"), mp.mpf("0.3"), mp.mpf(1), mp.mpf("2.5"), mp.mpf(6)]


def sphere_area(d):
    return {2: 2 * mp.pi, 3: 4 * mp.pi}[d]


def k(d, rho):
    tail = mp.quad(lambda t: 1 / (mp.sinh(t) ** (d - 1) * mp.cosh(t) ** 2), [rho, rho + 1, rho + 5, mp.inf])
    return -mp.cosh(rho) * tail / sphere_area(d)


def k2_paper(rho):
    # (c-1)/(c+1) = tanh^2(rho/2), written to stay accurate at both ends
    lt = mp.log(mp.tanh(rho / 2)) if rho < 1 else mp.log1p(-2 / (mp.exp(rho) + 1))
    return (1 + mp.cosh(rho) * lt) / (2 * mp.pi)


def wall2(z):
    # a = 1: Int_R k(dist(x, gamma(t))) dt with cosh dist = cosh t * cosh delta
    b = mp.sqrt(1 + z * z)
    return 2 * mp.quad(lambda t: k2_paper(mp.acosh(mp.cosh(t) * b)), [0, 1, 4, 16, 60])


def wall3(z):
    b = mp.sqrt(1 + z * z)
    return mp.quad(lambda r: 2 * mp.pi * mp.sinh(r) * k(3, mp.acosh(b * mp.cosh(r))), [0, 1, 4, 12])


def bump(r, R):
    return (1 - (r / R) ** 2) ** 3 if r < R else mp.mpf(0)


def smooth_center(d, R):
    # h = d Int k(rho) A(rho) f(rho) drho at the bump center
    A = lambda r: sphere_area(d) * mp.sinh(r) ** (d - 1)
    kk = (lambda r: k2_paper(r)) if d == 2 else (lambda r: k(3, r))
    return d * mp.quad(lambda r: kk(r) * A(r) * bump(r, R), [0, R / 4, R / 2, R])


def elementary(u, w):
    z = u / w
    return (z * mp.atan(1 / z) - 1) / mp.pi


def elementary_ww(u, w):
    # reverse-II (d_w, d_w) in the half-plane chart: h_ww + h_w / w - h / w^2
    f = lambda ww: elementary(u, ww)
    return mp.diff(f, w, 2) + mp.diff(f, w, 1) / w - f(w) / w ** 2


ELEM_PTS = [(mp.mpf(u), mp.mpf(w)) for u, w in
            [("0.3", "1"), ("0.8", "1.2"), ("1.5", "1"), ("2", "0.7"), ("-0.5", "0.9"),
             ("-2.5", "1.1"), ("0.2", "2"), ("3", "1.5"), ("-1.2", "0.6"), ("4", "1")]]


def lit(x):
    return mp.nstr(x, 20, min_fixed=-1, max_fixed=-1) if x != 0 else "0.0"


def table(name, rows):
    print(f"inline constexpr double {name}[][2] = {{")
    for a, b in rows:
        print(f"    {{{lit(a)}, {lit(b)}}},")
    print("};")


print("// Frozen reference values. Generated by tests/oracles/generate.py (mpmath, 50 digits);")
print("// do not edit by hand.")
print("#pragma once\n")
print("namespace oracle {\n")
print("// {rho, k(rho)} from the defining integral, d = 2 and d = 3")
table("kernel_d2", [(r, k(2, r)) for r in RHOS])
table("kernel_d3", [(r, k(3, r)) for r in RHOS])
print("\n// {z, wall solution at <x,v> = z} for a unit-weight wall")
table("wall_d2", [(z, wall2(z)) for z in [mp.mpf("0.1"), mp.mpf("0.7"), mp.mpf(2)]])
table("wall_d3", [(z, wall3(z)) for z in [mp.mpf("0.3"), mp.mpf("1.2")]])
print("\n// {R, h at the center} for the unit bump (1 - (r/R)^2)^3")
table("bump_center_d2", [(R, smooth_center(2, R)) for R in [mp.mpf("0.8"), mp.mpf("1.5")]])
table("bump_center_d3", [(R, smooth_center(3, R)) for R in [mp.mpf("0.8")]])
print("\n// {u, w, reverse-II(d_w, d_w)} of (1/pi)[z arctan(1/z) - 1], z = u/w, half-plane chart")
print("inline constexpr double elementary_ww[][3] = {")
for u, w in ELEM_PTS:
    print(f"    {{{lit(u)}, {lit(w)}, {lit(elementary_ww(u, w))}}},")
print("};")
print("\n}  // namespace oracle")
