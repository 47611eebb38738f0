from hypothesis import strategies as st

from purecubic.eisenstein import EisensteinInt


def eisenstein(bound: int = 60, nonzero: bool = True):
    s = st.builds(EisensteinInt, st.integers(-bound, bound), st.integers(-bound, bound))
    return s.filter(lambda z: not z.is_zero()) if nonzero else s


def coprime_to_3(bound: int = 60):
    # lambda divides a + b w exactly when 3 divides a + b
    return eisenstein(bound).filter(lambda z: (z.a + z.b) % 3 != 0)
