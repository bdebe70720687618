# cle_integrability/core/anchors.py
"""
Anchor registry: every formula the CLI evaluates and every check the verify
suites emit is tied to the closed-form statement it reproduces.
"""

from cle_integrability.core.errors import UsageError


FORMULA_ANCHORS = {
    # thickness and loop mass
    "thickness-mgf": "exponential moment of the electrical thickness; finite iff lambda < 1 - kappa/8",
    "kw-mgf": "conjectured thickness moment, equal to the true one after kappa -> 16/kappa",
    "loop-mass-ratio": "alpha-dependence x/sin(pi x) of the loop measure with an alpha insertion",
    "normalized-loop-mass": "loop-mass ratio normalized at alpha = gamma (lambda = 0)",
    # sphere and disk
    "reflection": "unit-volume reflection coefficient R-bar(alpha)",
    "sphere-area-density": "area law of the two-pointed quantum sphere: R-bar(alpha) a^{(2/g)(alpha-Q)-1} / 2",
    "sphere-area-tail": "sphere mass above unit area: gamma R-bar(alpha) / (4(Q - alpha))",
    "disk-length-constant": "boundary length law of the quantum disk, constant R_gamma",
    "u-bar": "one-point disk structure constant U-bar(alpha)",
    "disk-length": "boundary length law |M(alpha; ell)| of the one-insertion disk",
    "fzz-density": "FZZ area law: inverse gamma with shape (2/g)(Q-alpha), scale 1/(4 sin(pi g^2/4))",
    "fzz-laplace": "FZZ area transform with K_{(2/g)(Q-alpha)}(ell sqrt(mu / sin(pi g^2/4)))",
    "fzz-survival": "probability that the FZZ area exceeds one (lower incomplete gamma)",
    "welding-mass": "small-length welding mass integral with the lower incomplete gamma",
    # generalized disk
    "m-prime": "M' = 2 (mu / (4 sin(pi g^2/4)))^{kappa'/8}",
    "gqd-laplace": "generalized quantum disk area transform K-bar_{4/kappa'}(ell M')",
    "gqd-weighted-laplace": "generalized disk E[A e^{-mu A}] with K_{1-4/kappa'}(M' ell)",
    "gqd-mean-area": "generalized disk mean area (kappa'/(16 s)) Gamma(1-4/k')/Gamma(4/k') ell^{8/k'}",
    "gqd1-laplace": "one-point generalized disk area transform K-bar_{1-4/kappa'}(M' ell)",
    "gqd1-tail": "one-point generalized disk area tail by Laplace inversion",
    "gqd-length-density": "generalized disk length law ell^{-2-g^2/4} (R'_gamma set to one)",
    "gqd1-length-density": "one-point generalized disk length law ell^{4/kappa'-2}",
    "gqd-tail": "area tail Gamma(4/k')/(Gamma(2-4/k') Gamma(2-k'/4)) (4s)^{1-k'/4} x^{1-k'/4}",
    "fd-tail": "alpha-inserted forested disk area tail with exponent -1 - k'/4 + 2 alpha/g",
    # annulus and stable jumps
    "annulus-mass": "quantum annulus mass cos(pi(beta - 3/2)) / (pi sqrt(ab)(a + b))",
    "levy-jump-density": "size-biased jump law C (a/b)^{beta+1} / (a + b) of the tau^-1 weighted process",
    "jump-second-moment": "second moment of the size-biased jump law, equal to a^2",
    "hitting-inverse-mean": "E[1/tau_{-1}] = pi / sin(-pi beta)",
    "tau-ratio": "E[tau_{-a} / tau_{-a-b}] = a / (a + b)",
    # conformal radius
    "dilation": "dilation constant (1/pi)(kappa/4 - 1) cot(pi(1 - 4/kappa))",
    "cr-moment": "conformal radius moment -cos(4 pi/kappa) / cos(pi sqrt((1-4/kappa)^2 - 8 lambda/kappa))",
    "cr-moment-pole": "first cosine zero of the conformal radius moment, -1 + 2/kappa + 3 kappa/32",
    "cr-gap-mean": "mean conformal-radius gap E[B_1] = -d/dlambda E[CR^lambda] at 0",
    # cascade jump measure
    "nu-theta": "jump measure nu_theta of the perimeter cascade",
    "psi-theta": "Laplace exponent Psi_theta of the cascade's Levy process",
    # named constants
    "R_gamma": "quantum disk length constant R_gamma",
    "U_bar": "one-point disk structure constant U-bar(alpha)",
    "R_bar": "unit-volume reflection coefficient R-bar(alpha)",
    "M_prime": "generalized disk area scale M'",
    "C_fd_ratio": "undetermined forested-disk ratio (no value)",
    "D_alpha": "generalized disk insertion weight D(alpha)",
    "jump_moment": "E[sum |jump|^{2 alpha/g}] over a unit stable excursion",
    "C_gamma": "loop measure constant C_gamma with tan(pi(4/g^2 - 1))",
    "Ktilde_gamma": "intermediate welding constant K-tilde_gamma",
    "K_gamma": "welding constant K_gamma = C_gamma pi g / (2 (Q - g)^2)",
    "Cprime_over_Rprime2": "non-simple loop measure constant C'_gamma / R'_gamma^2",
    "Kprime_over_Rprime2": "non-simple welding constant K'_gamma / R'_gamma^2",
    "Ktilde_prime_over_Rprime2": "non-simple intermediate welding constant K-tilde'_gamma / R'_gamma^2",
    "frakC": "annulus constant cos(pi(beta - 3/2)) / pi",
    "Delta_alpha": "scaling dimension (alpha/2)(Q - alpha/2)",
    "welding_C": "disk welding constant (Q - g) Gamma(g^2/4) Gamma(1 - g^2/4) / (4 g)",
    "E_B1": "mean conformal-radius gap E[B_1]",
}


CHECK_ANCHORS = {
    "mgf_identity": FORMULA_ANCHORS["normalized-loop-mass"],
    "kw_flip": FORMULA_ANCHORS["kw-mgf"],
    "kw_divergence": "thickness moment blows up as kappa -> 8 at fixed lambda > 0; the conjectured form does not",
    "kappa4_continuity": "removable singularities at kappa = 4 match their limits",
    "fzz_roundtrip": FORMULA_ANCHORS["fzz-laplace"],
    "gqd_derivative": FORMULA_ANCHORS["gqd-weighted-laplace"],
    "gqd_mean_limit": FORMULA_ANCHORS["gqd-mean-area"],
    "gqd_tail": FORMULA_ANCHORS["gqd-tail"],
    "fd_tail_reduction": FORMULA_ANCHORS["fd-tail"],
    "welding_asymptotic": FORMULA_ANCHORS["welding-mass"],
    "cr_moment_normalization": FORMULA_ANCHORS["cr-moment"],
    "dilation_reciprocal": FORMULA_ANCHORS["dilation"],
    "jump_second_moment": FORMULA_ANCHORS["jump-second-moment"],
    "qd_ratio_identity": "size-biased jump law equals C b |QD(b)| / (sqrt(ab)(a+b) |QD(a)|)",
    "k_from_c": FORMULA_ANCHORS["K_gamma"],
    "kprime_positive": FORMULA_ANCHORS["Kprime_over_Rprime2"],
    "welding_constant": FORMULA_ANCHORS["welding_C"],
    "ubar_rbar_identity": "U-bar(gamma)^2 / R-bar(gamma) closed form",
    "delta_gamma": FORMULA_ANCHORS["Delta_alpha"],
    "disk_length_constant": FORMULA_ANCHORS["disk-length-constant"],
    "annulus_value": FORMULA_ANCHORS["annulus-mass"],
    "dilation_value": FORMULA_ANCHORS["dilation"],
    "psi_theta_resolution": FORMULA_ANCHORS["psi-theta"],
    "tau_ratio": FORMULA_ANCHORS["tau-ratio"],
    "inverse_mean": FORMULA_ANCHORS["hitting-inverse-mean"],
    "inverse_mean_refinement": "the inverse-mean estimate converges to its closed form as the jump cutoff shrinks",
    "jump_intensity": "jump set of the unconditioned process is Poisson with intensity b^{-beta-1} db dt",
    "martingale": "the compensated stable process has mean zero",
    "tau_scaling": "tau_{-a} has the law of a^beta tau_{-1}",
    "weighted_second_moment": FORMULA_ANCHORS["jump-second-moment"],
    "loop_length_density": FORMULA_ANCHORS["levy-jump-density"],
    "self_similarity": "outermost loop lengths under boundary c a have the law of c times those under a",
    "rank_size": "outermost loop lengths carry the jump intensity x^{-beta-1}",
    "jump_moment": FORMULA_ANCHORS["jump_moment"],
    "jump_moment_divergence": "the jump moment of order p <= nu is infinite; the discrete estimate grows with n",
    "looptree_quotient": "each jump of the excursion becomes one loop of the looptree quotient",
    "cr_roundtrip": FORMULA_ANCHORS["cr-moment"],
    "cr_mean": FORMULA_ANCHORS["cr-gap-mean"],
    "renewal_rate": "renewal count of conformal-radius gaps grows like the dilation constant times C",
}


def anchor_for(name):
    """Anchor text for a formula or check; unregistered names are refused."""
    key = name.split("[", 1)[0]
    if key in CHECK_ANCHORS:
        return CHECK_ANCHORS[key]
    if key in FORMULA_ANCHORS:
        return FORMULA_ANCHORS[key]
    raise UsageError(f"no anchor registered for '{name}'")
