"""High-precision reference values for the exact-solution tests.

Independent of the C++ code: the saddle point comes from mpmath.findroot on
the dispersion relation, tau'' from mpmath.diff, the profile from erf/erfc.
Run with `python3 exact_oracle.py`; the printed numbers are pasted into
tests/test_exact_solution.cpp.
"""
from mpmath import mp, mpf, acosh, cosh, sinh, tanh, log, atanh, tan, cos, sin, sec, sqrt, erf, erfc, diff, findroot, pi

mp.dps = 40


def dual(k):
    return -log(tanh(k)) / 2


def consts(k1, k2):
    a, b = 2 * dual(k1), 2 * k2
    return cosh(a) * cosh(b), sinh(a) * sinh(b)


def gamma_imag(nu, k1, k2):
    A, B = consts(k1, k2)
    return acosh(A - B * cosh(nu))


def saddle(theta, k1, k2):
    A, B = consts(k1, k2)
    g = lambda nu: B * sinh(nu) - tan(theta) * sinh(gamma_imag(nu, k1, k2))
    numax = 2 * abs(k1 - dual(k2))
    return findroot(g, (mpf("1e-30"), numax * (1 - mpf("1e-20"))), solver="anderson") if theta != 0 else mpf(0)


def tau(theta, k1, k2):
    nu = saddle(theta, k1, k2)
    return cos(theta) * gamma_imag(nu, k1, k2) + sin(theta) * nu


def gamma2(theta, k1, k2):
    nu = saddle(theta, k1, k2)
    # second derivative in omega of gamma(omega) at omega = i nu
    return diff(lambda w: acosh(consts(k1, k2)[0] - consts(k1, k2)[1] * cosh(w)), nu, 2) * -1


def main():
    for k in ("1.0", "0.6", "0.3"):
        print(f"dual({k}) = {mp.nstr(dual(mpf(k)), 20)}")
    print("kc =", mp.nstr(atanh(sqrt(2) - 1), 20))
    print("F(1) = erfc(1) =", mp.nstr(erfc(1), 20), " G(1) =", mp.nstr(erf(1), 20))
    print("G(0.5) =", mp.nstr(erf(mpf("0.5")), 20))
    m = lambda k1, k2: (1 - (sinh(2 * k1) * sinh(2 * k2)) ** -2) ** (mpf(1) / 8)
    print("m*(0.6,0.6) =", mp.nstr(m(mpf("0.6"), mpf("0.6")), 20))
    print("m*(0.5,0.8) =", mp.nstr(m(mpf("0.5"), mpf("0.8")), 20))
    print("p(pi/8) =", mp.nstr(tan(pi / 8) / (1 + tan(pi / 8)), 20))
    for k1, k2 in (("0.6", "0.6"), ("0.5", "0.8")):
        k1, k2 = mpf(k1), mpf(k2)
        print(f"--- k1={k1} k2={k2}: nu_max = {mp.nstr(2 * abs(k1 - dual(k2)), 20)}, "
              f"gamma(0) = {mp.nstr(gamma_imag(0, k1, k2), 20)}, gamma2(0) = {mp.nstr(gamma2(0, k1, k2), 20)}")
        for th in (mpf("0.3"), mpf("0.6"), pi / 4, mpf("1.2")):
            nu = saddle(th, k1, k2)
            g2 = gamma2(th, k1, k2)
            t = tau(th, k1, k2)
            tpp = diff(lambda x: tau(x, k1, k2), th, 2)
            print(f"theta={mp.nstr(th, 12)} nu={mp.nstr(nu, 20)} tau={mp.nstr(t, 20)} gamma2={mp.nstr(g2, 20)} "
                  f"stiffness={mp.nstr(t + tpp, 20)} identity={mp.nstr(sec(th) ** 3 / g2, 20)} "
                  f"z_unit={mp.nstr(sec(th) ** 2 / sqrt(g2), 20)}")
    # limiting profile -m* sgn(z) G(|z|), z = alpha sec^2 / sqrt(gamma2), at alpha = 1, theta = 0.3
    k = mpf("0.6")
    z = sec(mpf("0.3")) ** 2 / sqrt(gamma2(mpf("0.3"), k, k))
    print("profile(alpha=1, theta=0.3, k=0.6) =", mp.nstr(-m(k, k) * erf(z), 20))


if __name__ == "__main__":
    main()
