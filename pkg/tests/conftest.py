from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(bound: int = 50, nonzero: bool = False):
    num = st.integers(-bound, bound)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, bound))


def distinct_points(n: int, bound: int = 20):
    return st.lists(rationals(bound), min_size=n, max_size=n).filter(lambda x: len(set(x)) == n)
