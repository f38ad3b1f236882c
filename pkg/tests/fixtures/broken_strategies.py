"""External strategies for the axiom checker; all but ``lukasiewicz`` are broken."""

from cftm import F1Strategy, F2Strategy


def additive(mu, delta):
    return mu + delta


def lukasiewicz(mu, delta, t):
    return max(0.0, mu + delta - 1.0)


total = F2Strategy("total", lambda values: sum(values))
wrapped_additive = F1Strategy("additive", lambda mu, d, t: mu + d)
