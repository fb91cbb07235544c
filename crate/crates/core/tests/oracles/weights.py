"""Extended-precision reference values frozen into tests/acceptance.rs."""
from mpmath import mp, mpf, exp

mp.dps = 50
I, pe, pc = mpf(1), mpf("1.2"), mpf("0.53")
kappa, pibar = mpf("0.3"), mpf(100)
rho, rho_pi = mpf("0.98"), mpf(0)
sigma = sigma_pi = mpf("16.5")
lam = mpf("0.5")


def weights(E):
    prem = max(pibar - kappa * E, mpf(0))
    C = I / pc - pe / pc * E
    return (
        1 - exp(-rho * E - rho_pi * prem),
        1 - exp(-rho * C),
        exp(-sigma * E) * (1 - exp(-sigma_pi * prem)),
        exp(-sigma * C),
    )


aF, bF, aP, bP = weights(mpf("0.5"))
print("weights(E=0.5):", *(mp.nstr(x, 20) for x in (aF, bF, aP, bP)))
aF, bF, aP, bP = weights(mpf(0))
g0 = I / pe * (lam * aF / (aF + bF) + (1 - lam) * aP / (aP + bP))
print("gamma(0):", mp.nstr(g0, 20))
