"""High-precision evaluation of the frozen reference values used in tests.

Every value is computed with mpmath at 40 digits straight from the formulas,
independently of the Rust implementation.

    python3 derived_values.py
"""
import mpmath as mp

mp.mp.dps = 40

HBAR = mp.mpf("1.054571817e-34")
KB = mp.mpf("1.380649e-23")
C = mp.mpf("299792458")

# water_293K
RHO0, CS, ETA, DEPS, T = mp.mpf(998), mp.mpf(1480), mp.mpf("1.4"), mp.mpf("0.79"), mp.mpf(293)


def show(name, value):
    print(f"{name:40s} {mp.nstr(value, 20)}")


# mode amplitude |f_q| for |q| = 1e6 1/m, V = 1e-18 m^3
omega = CS * mp.mpf("1e6")
show("mode_norm(water, 1e6, 1e-18)", mp.sqrt(HBAR * omega * RHO0 / (2 * mp.mpf("1e-18") * CS**2)))

# half-space variance at z = 1 nm
z = mp.mpf("1e-9")
show("half_space(water, 1nm)", -HBAR * RHO0 * CS / (32 * mp.pi**2 * z**4))

# Casimir pressure at a = 1 um
a = mp.mpf("1e-6")
show("casimir(water, 1um)", HBAR * CS * mp.pi**2 / (480 * a**4))

# scattering ratio, 350 nm, backscatter
lam = mp.mpf("350e-9")
for label, w in (("vacuum", 2 * mp.pi * C / lam), ("in-medium", 2 * mp.pi * C * ETA / lam)):
    r = 2 * (HBAR * w / (2 * KB * T)) * (CS / C) * ETA**4 / DEPS**2
    show(f"R(water, 350nm, pi, {label})", r)

# equal-time correlator at |dx| = 1e-8 m
dx = mp.mpf("1e-8")
show("corr_closed(water, 1e-8, 0)", -HBAR * RHO0 / (2 * mp.pi**2 * CS * dx**4))

# regulated radial integral K(w) = int_0^inf u^2 sin(w u) exp(-e u) du, e = 0.1, w = 1
e, w = mp.mpf("0.1"), mp.mpf(1)
k_quad = mp.quad(lambda u: u**2 * mp.sin(w * u) * mp.exp(-e * u), [k * mp.pi for k in range(0, 400)])
show("K(w=1, e=0.1) quadrature", k_quad)
show("K(w=1, e=0.1) analytic", mp.im(2 / (e - 1j * w) ** 3))

# sum_{k=1}^{n-1} sin^-4(pi k / n)
for n in (2, 3, 4, 6):
    s = mp.fsum(mp.sin(mp.pi * k / n) ** -4 for k in range(1, n))
    show(f"sum sin^-4 (n={n})", s)
    show(f"  (n^2-1)(n^2+11)/45", mp.mpf((n * n - 1) * (n * n + 11)) / 45)
