"""Formula index for the verification registry.

Each check names one key here; the value is the statement being tested,
written as a formula.
"""

ANCHORS = {
    "homogeneity": "|c f|_X = |c| |f|_X",
    "lattice": "|f| <= |g|  =>  |f|_X <= |g|_X",
    "quasi-triangle": "|f + g|_X <= K (|f|_X + |g|_X)",
    "semivariation": "||m||(A) = sup_{|y*| <= 1} |<m, y*>|(A) = max_s |sum_{i in A} s_i m_i|",
    "semivariation-set-function": "||m||(A) <= ||m||(A u B) <= ||m||(A) + ||m||(B)",
    "semivariation-scalar": "|m(A)| <= ||m||(A),  |<m, y*>|(A) <= ||m||(A) for |y*| <= 1",
    "rybakov": "|<m, y*>|(A) = 0  <=>  A is m-null",
    "layer-cake": "|f|_{L1(||m||)} = int_0^inf ||m||([|f| > t]) dt",
    "quasi-subadditivity": "Phi(sum t_n) <= sum Phi(2^n a^n t_n) / (2^n a^n)",
    "delta2": "Phi(2t) <= C Phi(t)",
    "chi-norm": "|chi_A|_{X^Phi} = 1 / Phi^-1(1 / |chi_A|_X)",
    "linf-embedding": "|f|_{X^Phi} <= |f|_inf / Phi^-1(1 / |chi_Omega|_X)",
    "norm-below-modular": "|f|_{X^Phi} <= max(1, |Phi(|f|)|_X)",
    "bounded-family": "sup_H |Phi(|h|)|_X <= M  =>  sup_H |h|_{X^Phi} <= max(1, M)",
    "modular-below-norm": "|f|_{X^Phi} < 1  =>  |Phi(|f|)|_X <= |f|_{X^Phi}",
    "modular-above-norm": "|f|_{X^Phi} > 1  =>  |Phi(|f|)|_X >= |f|_{X^Phi}",
    "bounded-to-modular": "sup_H |h|_{X^Phi} < M  =>  sup_H |Phi(|h| / M)|_X <= 1",
    "fatou-normalized": "|Phi(|f| / |f|_{X^Phi})|_X <= 1",
    "fatou-modular": "|f|_{X^Phi} <= 1  =>  |Phi(|f|)|_X <= |f|_{X^Phi}",
    "fatou-transfer": "0 <= f_n increasing to f  =>  |f|_{X^Phi} = sup_n |f_n|_{X^Phi}",
    "delta2-null-sequences": "|f_n|_{X^Phi} -> 0  <=>  |Phi(|f_n|)|_X -> 0",
    "delta2-order-continuity": "0 <= f_n increasing to f  =>  |f - f_n|_{X^Phi} -> 0",
    "weak-orlicz": "|f|_{L1w(m)^Phi} = sup_{|y*| <= 1} |f|_{L1(|<m, y*>|)^Phi}",
    "semivariation-orlicz": "L^Phi(||m||) = L1(||m||)^Phi",
    "s-convexity": "|(sum |f_k|^s)^(1/s)|_X <= C (sum |f_k|_X^s)^(1/s)",
    "l-convexity-transfer": "(1 - delta)^s = 1 - eps",
    "calderon-product": "|f| <= lam |f0|^(1-theta) |f1|^theta,  |f0|_{X0} <= 1,  |f1|_{X1} <= 1",
    "calderon-orlicz": "(X^Phi0)^(1-theta) (X^Phi1)^theta = X^Phi,  Phi^-1 = (Phi0^-1)^(1-theta) (Phi1^-1)^theta",
    "interpolation-exponent": "[L^p0(||m||), L^p1(||m||)]_theta = L^p(||m||),  1/p = (1-theta)/p0 + theta/p1",
    "calderon-powers": "(X0^(1-theta) X1^theta)_[r] = (X0_[r])^(1-theta) (X1_[r])^theta",
}
