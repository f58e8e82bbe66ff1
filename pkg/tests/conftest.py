from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")


def sign_sequences(min_size=0, max_size=60):
    """Sequences of exact +-1 gradients."""
    return st.lists(st.sampled_from([-1.0, 1.0]), min_size=min_size, max_size=max_size)


def box_sequences(min_size=0, max_size=60):
    """Gradients anywhere in [-1, 1]."""
    return st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=min_size, max_size=max_size)


class Scripted:
    """Learner replaying a fixed list of plays; records what it observed."""

    def __init__(self, plays):
        self.plays = list(plays)
        self.seen = []

    def next_play(self):
        return self.plays[len(self.seen)]

    def observe(self, g):
        self.seen.append(g)
