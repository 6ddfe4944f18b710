# Copyright 2026 The Minimax Forge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the frozen reference values used by the unit tests.

Needs mpmath, numpy and scipy. Writes bessel_reference.inc and
oracle_values.h next to this script. Every value comes from direct
quadrature or arbitrary precision arithmetic, never from the library.
"""

import os

import mpmath as mp
import numpy as np
from scipy import integrate, special

mp.mp.dps = 40
HERE = os.path.dirname(os.path.abspath(__file__))

BESSEL_ORDERS = [0, 0.5, 1, 2.5, 4, 9.5, 30, 100, 200]
BESSEL_ARGS = [1e-3, 0.1, 1, 5, 29, 31, 50, 100, 500, 1e3, 5e3, 1e4]


def write_bessel():
    with open(os.path.join(HERE, "bessel_reference.inc"), "w") as out:
        out.write("// Generated by gen_oracles.py: {nu, x, ln I_nu(x), "
                  "I_{nu+1}(x)/I_nu(x)}\n")
        for nu in BESSEL_ORDERS:
            for x in BESSEL_ARGS:
                i0 = mp.besseli(nu, x)
                i1 = mp.besseli(nu + 1, x)
                out.write("{%r, %r, %s, %s},\n" % (
                    float(nu), float(x), mp.nstr(mp.log(i0), 20),
                    mp.nstr(i1 / i0, 20)))


def fb_circle(a, g):
    """log C and mean on the unit circle by mpmath quadrature."""
    def f(t, w):
        z = (mp.cos(t), mp.sin(t))
        e = mp.exp(-a[0] * z[0] ** 2 - a[1] * z[1] ** 2 + g[0] * z[0] +
                   g[1] * z[1])
        return e * w(z)
    c = mp.quad(lambda t: f(t, lambda z: 1), [0, mp.pi / 2, mp.pi,
                                              3 * mp.pi / 2, 2 * mp.pi])
    m = [mp.quad(lambda t: f(t, lambda z: z[i]),
                 [0, mp.pi / 2, mp.pi, 3 * mp.pi / 2, 2 * mp.pi]) / c
         for i in range(2)]
    return float(mp.log(c)), [float(v) for v in m]


def fb_sphere(a, g):
    """log C and mean on S^2 by scipy double quadrature."""
    def dens(th, ph):
        z = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph),
                      np.cos(th)])
        return np.exp(-np.dot(a, z * z) + np.dot(g, z)) * np.sin(th), z

    opts = dict(epsabs=0, epsrel=1e-13)

    def integ(fn):
        return integrate.dblquad(lambda th, ph: fn(*dens(th, ph)), 0,
                                 2 * np.pi, 0, np.pi, **opts)[0]

    c = integ(lambda w, z: w)
    m = [integ(lambda w, z, i=i: w * z[i]) / c for i in range(3)]
    return float(np.log(c)), m


def two_shell_posterior_mean(radius):
    """d=3, prior {0, radius} with equal mass, X = e1: first coordinate."""
    x = mp.mpf(1)

    def shell(b, moment):
        # Uniform direction on S^2 has cos(angle) uniform on [-1, 1].
        return mp.quad(lambda c: (b * c) ** moment *
                       mp.exp(-(x * x - 2 * b * x * c + b * b) / 2) / 2,
                       [-1, 1])
    num = 0.5 * shell(0, 1) + 0.5 * shell(radius, 1)
    den = 0.5 * shell(0, 0) + 0.5 * shell(radius, 0)
    return float(num / den)


REG_X = [[1.0, 0.5], [0.2, 1.0], [-0.3, 0.4]]
REG_Y = [0.7, -0.2, 0.5]
REG_B = 1.5


def regression_circle_mean():
    xm = mp.matrix(REG_X)
    ym = mp.matrix(REG_Y)

    def w(t):
        th = mp.matrix([REG_B * mp.cos(t), REG_B * mp.sin(t)])
        r = ym - xm * th
        return mp.exp(-(r.T * r)[0] / 2), th
    pts = [0, mp.pi / 2, mp.pi, 3 * mp.pi / 2, 2 * mp.pi]
    den = mp.quad(lambda t: w(t)[0], pts)
    return [float(mp.quad(lambda t: w(t)[0] * w(t)[1][i], pts) / den)
            for i in range(2)]


def radial_risk(d, b, shrink):
    """Exact risk of x -> shrink(|x|) x/|x| at theta = b e1 in dimension d."""
    def integrand(r2, z1):
        x1 = b + z1
        q = x1 * x1 + r2
        nq = np.sqrt(q)
        m = shrink(nq)
        loss = (m * x1 / nq - b) ** 2 + m * m * r2 / q
        return loss * np.exp(-z1 * z1 / 2) / np.sqrt(2 * np.pi) * \
            np.exp(special.xlogy(d / 2 - 1.5, r2) - r2 / 2 -
                   (d - 1) / 2 * np.log(2) - special.gammaln((d - 1) / 2))
    hi = d + 40 * np.sqrt(2 * d) + 60
    return integrate.dblquad(integrand, -14, 14, 0, hi, epsabs=1e-11,
                             epsrel=1e-11)[0]


def james_stein(d):
    return lambda r: max(0.0, r - (d - 3.0) / r)


def boundary_bayes(d, radius):
    nu = d / 2 - 1
    return lambda r: radius * special.ive(nu + 1, radius * r) / \
        special.ive(nu, radius * r)


def write_header():
    rng = np.random.default_rng(20260415)
    lines = []

    def scalar(name, v):
        lines.append("inline constexpr double %s = %r;" % (name, float(v)))

    def array(name, vals):
        lines.append("inline constexpr double %s[] = {%s};" % (
            name, ", ".join(repr(float(v)) for v in vals)))

    scalar("kLogVmfD2Kappa1", mp.log(mp.quad(lambda t: mp.exp(mp.cos(t)),
                                             [0, mp.pi, 2 * mp.pi])))

    lines.append("")
    lines.append("// Fisher-Bingham rows: a[d], gamma[d], log C, mean[d].")
    fb2, fb3 = [], []
    for _ in range(3):
        a = rng.uniform(0.2, 3.0, 2)
        g = rng.normal(0.0, 1.5, 2)
        lc, m = fb_circle(a, g)
        fb2 += list(a) + list(g) + [lc] + m
    for _ in range(3):
        a = rng.uniform(0.2, 3.0, 3)
        g = rng.normal(0.0, 1.5, 3)
        lc, m = fb_sphere(a, g)
        fb3 += list(a) + list(g) + [lc] + m
    array("kFisherBingham2", fb2)
    array("kFisherBingham3", fb3)

    lines.append("")
    scalar("kTwoShellRadius", 2.0)
    scalar("kTwoShellMean", two_shell_posterior_mean(mp.mpf(2)))

    lines.append("")
    array("kRegX", [v for row in REG_X for v in row])
    array("kRegY", REG_Y)
    scalar("kRegRadius", REG_B)
    array("kRegCircleMean", regression_circle_mean())

    lines.append("")
    lines.append("// Exact risks by two-dimensional quadrature.")
    scalar("kJamesSteinRiskD10AtSqrt10",
           radial_risk(10, np.sqrt(10), james_stein(10)))
    js20 = [radial_risk(20, j * 0.05 * np.sqrt(20), james_stein(20))
            for j in range(21)]
    scalar("kJamesSteinWorstD20", max(js20))
    scalar("kBoundaryBayesRiskD10AtZero",
           radial_risk(10, 0.0, boundary_bayes(10, np.sqrt(10))))
    scalar("kBoundaryBayesRiskD10AtRadius",
           radial_risk(10, np.sqrt(10), boundary_bayes(10, np.sqrt(10))))

    with open(os.path.join(HERE, "oracle_values.h"), "w") as out:
        out.write("// Generated by gen_oracles.py; do not edit.\n")
        out.write("#ifndef MINIMAX_TESTS_ORACLE_VALUES_H_\n")
        out.write("#define MINIMAX_TESTS_ORACLE_VALUES_H_\n\n")
        out.write("namespace minimax::oracle {\n\n")
        out.write("\n".join(lines))
        out.write("\n\n}  // namespace minimax::oracle\n\n")
        out.write("#endif  // MINIMAX_TESTS_ORACLE_VALUES_H_\n")


if __name__ == "__main__":
    write_bessel()
    write_header()
