"""High-precision reference values frozen into the C++ unit tests.

Independent of the C++ implementation: roots via mpmath.findroot on
tight brackets or plain bisection, integrals via mpmath.quad, scale
functions via mpmath's own Talbot inversion at 40 digits, thresholds
from their defining equations. Run with `python3 freeze_values.py`.
"""
import mpmath as mp

mp.mp.dps = 40


def dejd_psi(beta, mu, sigma, lam, p, em, ep):
    return (mu * beta + sigma**2 * beta**2 / 2
            + lam * (p * em / (em + beta) + (1 - p) * ep / (ep - beta) - 1))


def dejd_xi(q, mu, sigma, lam, p, em, ep):
    f = lambda b: dejd_psi(-b, mu, sigma, lam, p, em, ep) - q
    xi1 = mp.findroot(f, (mp.mpf('1e-30'), em - mp.mpf('1e-20')), solver='anderson')
    xi2 = mp.findroot(f, (em + mp.mpf('1e-20'), em + 50), solver='anderson')
    return xi1, xi2


def dejd_report():
    mu, sigma, lam, p, em, ep = -1, 1, 1, mp.mpf('0.5'), 1, 2
    q, gamma = mp.mpf('0.05'), mp.mpf('0.04')
    xi1, xi2 = dejd_xi(q, mu, sigma, lam, p, em, ep)
    a_star = -mp.log(gamma / q * xi1 * xi2 / ((em - xi1) * (xi2 - em))) / em
    print('dejd fig2 q=0.05 xi1', mp.nstr(xi1, 20), 'xi2', mp.nstr(xi2, 20))
    print('dejd fig2 A*', mp.nstr(a_star, 20))
    # q = 0 root above eta_minus
    f0 = lambda b: dejd_psi(-b, mu, sigma, lam, p, em, ep)
    xi20 = mp.findroot(f0, (em + mp.mpf('1e-20'), em + 50), solver='anderson')
    ubar = mu + lam * (-p / em + (1 - p) / ep)
    a0 = -mp.log(gamma * xi20 / (abs(ubar) * em * (xi20 - em))) / em
    print('dejd fig2 q=0 xi20', mp.nstr(xi20, 20), 'A*(0)', mp.nstr(a0, 20))
    # value, stopping value, violation risk and clock from the closed forms
    l1 = (em - xi1) / (xi2 - xi1)
    l2 = (xi2 - em) / (xi2 - xi1)
    C1 = gamma / q * l1 * xi2 / em
    C2 = gamma / q * l2 * xi1 / em
    L1 = gamma / q * xi2 / (xi2 - xi1) * mp.exp(xi1 * a_star)
    L2 = -gamma / q * xi1 / (xi2 - xi1) * mp.exp(xi2 * a_star)
    phi3 = (L1 - C1) * mp.exp(-xi1 * 3) + (L2 - C2) * mp.exp(-xi2 * 3)
    G1 = gamma / q - C1 * mp.exp(-xi1) - C2 * mp.exp(-xi2)
    x, A = mp.mpf('1.5'), mp.mpf('0.5')
    R = mp.exp(-em * A) / em * ((xi2 - em) * l1 * mp.exp(-xi1 * (x - A)) - (em - xi1) * l2 * mp.exp(-xi2 * (x - A)))
    clock = (l1 * xi2 * (1 - mp.exp(-xi1 * (x - A))) + l2 * xi1 * (1 - mp.exp(-xi2 * (x - A)))) / (q * em)
    print('dejd fig2 phi(3)', mp.nstr(phi3, 20), 'G(1)', mp.nstr(G1, 20))
    print('dejd fig2 R(1.5,0.5)', mp.nstr(R, 20), 'clock(1.5,0.5)', mp.nstr(clock, 20))


def expjump_report(mu, sigma, lam, eta, q, gamma):
    psi = lambda b: mu * b + sigma**2 * b**2 / 2 + lam * (eta / (eta + b) - 1)
    zeta = mp.findroot(lambda b: psi(b) - q, (mp.mpf('1e-30'), 50), solver='anderson')
    a_star = mp.log(lam * zeta / (gamma * (eta + zeta))) / eta
    print('expjump', (mu, sigma, lam, eta), 'zeta', mp.nstr(zeta, 20), 'A*', mp.nstr(a_star, 20))
    W = lambda x: mp.invertlaplace(lambda s: 1 / (psi(s) - q), x, method='talbot')
    print('  W(1)', mp.nstr(W(1), 20))


def ts_psi(b, c, C, lam, alpha):
    return c * b + C * lam**alpha * mp.gamma(-alpha) * ((1 + b / lam)**alpha - 1 - b * alpha / lam)


def vg_psi(b, c, C, lam):
    return c * b + C * (b / lam - mp.log(1 + b / lam))


def bisect(f, lo, hi, iters=120):
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError('no sign change')
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def sn_threshold(tail_integral, zeta, gamma, rho):
    def t_h(a):
        if rho is None:
            return 1 / zeta
        return 1 / zeta - mp.exp(-rho * a) / (zeta + rho)
    phi = lambda a: tail_integral(a) / zeta - gamma * t_h(a)
    return bisect(phi, mp.mpf('1e-8'), mp.mpf(20), iters=80)


def ts_report(c, C, lam, alpha, q, gamma):
    zeta = mp.findroot(lambda b: ts_psi(b, c, C, lam, alpha) - q, (mp.mpf('1e-30'), 50), solver='anderson')
    dens = lambda u: C * mp.exp(-lam * u) / u**(1 + alpha)
    tail_int = lambda a: mp.quad(lambda u: dens(u) * (1 - mp.exp(-zeta * (u - a))), [a, a + 1, mp.inf])
    print('ts', (c, C, lam, alpha), 'zeta', mp.nstr(zeta, 20))
    for rho in (1, 2, None):
        print('  rho', rho, 'A*', mp.nstr(sn_threshold(tail_int, zeta, gamma, rho), 20))
    tail1 = mp.quad(dens, [1, mp.inf])
    print('  levy tail at 1', mp.nstr(tail1, 20))
    W = lambda x: mp.invertlaplace(lambda s: 1 / (ts_psi(s, c, C, lam, alpha) - q), x, method='talbot')
    print('  W(0.5)', mp.nstr(W(mp.mpf('0.5')), 20), 'W(2)', mp.nstr(W(2), 20))


def vg_report(c, C, lam, q, gamma):
    zeta = mp.findroot(lambda b: vg_psi(b, c, C, lam) - q, (mp.mpf('1e-30'), 50), solver='anderson')
    dens = lambda u: C * mp.exp(-lam * u) / u
    tail_int = lambda a: mp.quad(lambda u: dens(u) * (1 - mp.exp(-zeta * (u - a))), [a, a + 1, mp.inf])
    print('vg', (c, C, lam), 'zeta', mp.nstr(zeta, 20))
    for rho in (1, 2, None):
        try:
            print('  rho', rho, 'A*', mp.nstr(sn_threshold(tail_int, zeta, gamma, rho), 20))
        except Exception as exc:  # no root: A* = 0
            print('  rho', rho, 'no root', exc)
    print('  levy tail at 1', mp.nstr(mp.quad(dens, [1, mp.inf]), 20))
    W = lambda x: mp.invertlaplace(lambda s: 1 / (vg_psi(s, c, C, lam) - q), x, method='talbot')
    print('  W(0.5)', mp.nstr(W(mp.mpf('0.5')), 20), 'W(2)', mp.nstr(W(2), 20))


if __name__ == '__main__':
    dejd_report()
    expjump_report(mp.mpf('0.3'), 0, mp.mpf('0.5'), 1, mp.mpf('0.05'), mp.mpf('0.04'))
    expjump_report(mp.mpf('0.175'), mp.mpf('0.5'), mp.mpf('0.5'), 1, mp.mpf('0.05'), mp.mpf('0.04'))
    ts_report(mp.mpf('0.05'), mp.mpf('0.05'), 2, mp.mpf('1.5'), mp.mpf('0.05'), mp.mpf('0.04'))
    ts_report(mp.mpf('0.05'), mp.mpf('0.075'), 2, mp.mpf('0.8'), mp.mpf('0.05'), mp.mpf('0.04'))
    vg_report(mp.mpf('0.05'), mp.mpf('0.075'), 2, mp.mpf('0.05'), mp.mpf('0.04'))
