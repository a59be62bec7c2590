"""Independent high-precision reference values for the LQ example.

Everything here is computed from closed-form means and direct quadrature of
the expected cost, with no reference to the C++ solvers. The printed values
are frozen into the C++ unit and acceptance tests.
"""
import mpmath as mp

mp.mp.dps = 40
E = mp.e


def xbar_mfc(q, T=1, x0=1):
    c = (1 - q) ** 2
    return 2 * x0 / (mp.exp(T) * (1 + c) + mp.exp(-T) * (1 - c))


def xbar_mfg(q, T=1, x0=1):
    c = 1 - q
    return 2 * x0 / (mp.exp(T) * (1 + c) + mp.exp(-T) * (1 - c))


def xbar_best_response(q, env, T=1, x0=1):
    return mp.exp(-T) * x0 + q * env * (1 - mp.exp(-2 * T)) / 2


def xbar_p_partial(q, p, T=1, x0=1):
    m = xbar_mfc(q, T, x0)
    c = 1 - q * p
    num = 2 * x0 + q * (1 - p) * m * (mp.exp(T) - mp.exp(-T))
    return num / (mp.exp(T) * (1 + c) + mp.exp(-T) * (1 - c))


def xbar_lambda(q, lam, T=1, x0=1):
    b = -q * (1 + lam * (1 - q))
    return 2 * x0 / (mp.exp(T) * (2 + b) - mp.exp(-T) * b)


def cost(rT, env, q, T=1, x0=1, sigma=1):
    """Expected cost of feedback -(x + r_t), r_t = rT e^{t-T}, env frozen."""
    r = lambda t: rT * mp.exp(t - T)
    m = lambda t: mp.exp(-t) * x0 - rT * mp.exp(-T) * mp.sinh(t)
    v = lambda t: sigma ** 2 * (1 - mp.exp(-2 * t)) / 2
    run = mp.quad(lambda t: (m(t) ** 2 + v(t) + (m(t) + r(t)) ** 2 + v(t)) / 2, [0, T])
    return run + ((m(T) - q * env) ** 2 + v(T)) / 2


def costs(q, p, T=1, x0=1):
    M = xbar_mfc(q, T, x0)
    X = xbar_p_partial(q, p, T, x0)
    env = p * X + (1 - p) * M
    hatJ = cost(-q * env, env, q, T, x0)
    starJ = cost(-(2 * q - q * q) * M, env, q, T, x0)
    return hatJ, starJ


def jstar(q, T=1, x0=1):
    M = xbar_mfc(q, T, x0)
    return cost(-(2 * q - q * q) * M, M, q, T, x0)


def lambda_cost(q, lam, T=1, x0=1):
    X = xbar_lambda(q, lam, T, x0)
    b = -q * (1 + lam * (1 - q))
    return cost(b * X, X, q, T, x0)


def p_star(q, T=1, x0=1):
    js = jstar(q, T, x0)
    return mp.findroot(lambda p: costs(q, p, T, x0)[0] - js, (mp.mpf('0.01'), mp.mpf('0.99')), solver='anderson')


if __name__ == '__main__':
    f = lambda x: mp.nstr(x, 15)
    print('contraction q=.5', f((1 - mp.exp(-2)) / 4))
    print('mfc q=.5', f(xbar_mfc(0.5)))
    print('mfg q=.5', f(xbar_mfg(0.5)))
    print('mfg q=-1', f(xbar_mfg(-1)), f(2 / (3 * E - 1 / E)))
    print('p-partial q=.5 p=.5', f(xbar_p_partial(0.5, 0.5)))
    print('lambda q=.5 l=.5', f(xbar_lambda(0.5, 0.5)))
    print('br(mfc) q=.5', f(xbar_best_response(0.5, xbar_mfc(0.5))))
    print('limit p*=.5', f(0.5 * xbar_mfc(0.5) + 0.5 * xbar_p_partial(0.5, 0.5)))
    print('int Y^2 q=.5', f((0.25 * xbar_mfc(0.5)) ** 2))
    print('riccati eta0 eta_T=0.25 T=1', f((-(E**2) + 1 - 0.25 * (E**2 + 1)) / (-(1 + E**2) - 0.25 * (E**2 - 1))))
    for q in [-1, -0.5, 0, 0.25, 0.5, 0.75]:
        h0, _ = costs(q, 0)
        h1, _ = costs(q, 1)
        print('q', q, 'J*', f(jstar(q)), 'hatJ0', f(h0), 'hatJ1', f(h1), 'PoI', f(jstar(q) - h0))
    for q in [0.25, 0.5, 0.75, -0.5]:
        try:
            print('p* q', q, f(p_star(q)))
        except Exception as e:
            print('p* q', q, 'fail', e)
    print('costs q=.5 p=.5', [f(c) for c in costs(0.5, 0.5)])
    print('lambda costs q=-.5', [mp.nstr(lambda_cost(-0.5, l / 20), 12) for l in range(21)])
