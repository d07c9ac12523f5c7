"""Unit tests for working-day classification."""

import numpy as np
import pytest

from src.exceptions import DegenerateClusteringError, ValidationError
from src.temporal.classify import classify_days
from src.temporal.profiles import DayProfile


def _profiles(n_days=28, seed=0):
    """Day 0 is a Sunday; weekends are flat, weekdays peak at commute times."""
    rng = np.random.default_rng(seed)
    profiles = []
    for day in range(n_days):
        counts = 100 + rng.normal(0, 3, size=48)
        if (6 + day) % 7 < 5:
            counts[14:18] += 80
            counts[34:38] += 80
            counts[18:34] -= 40
        profiles.append(DayProfile(day=day, counts=np.clip(counts, 0, None)))
    return profiles


class TestClassifyDays:
    """Test suite for classify_days."""

    @pytest.mark.parametrize("normalization", ["per_bin", "per_day"])
    def test_weekdays_are_working(self, normalization):
        """Test the larger cluster of weekday-shaped days is labelled B."""
        result = classify_days(_profiles(), seed=1, normalization=normalization, n_init=10)

        expected_working = [d for d in range(28) if (6 + d) % 7 < 5]
        assert result.working_days == expected_working
        assert result.label_of(0) == "A"
        assert result.label_of(1) == "B"
        assert result.centroids.shape == (2, 48)

    def test_label_sequence_in_day_order(self):
        """Test label_sequence follows day indices."""
        profiles = list(reversed(_profiles(14)))
        result = classify_days(profiles, seed=1, n_init=5)

        assert result.label_sequence()[:8] == ["A", "B", "B", "B", "B", "B", "A", "A"]

    def test_deterministic_under_seed(self):
        """Test repeated runs agree."""
        first = classify_days(_profiles(), seed=3, n_init=5)
        second = classify_days(_profiles(), seed=3, n_init=5)

        assert first.labels.tolist() == second.labels.tolist()
        assert first.inertia == second.inertia

    @pytest.mark.parametrize("normalization", ["per_bin", "per_day"])
    @pytest.mark.parametrize("factor", [0.125, 3.7, 1024.0])
    def test_labels_invariant_under_scaling(self, normalization, factor):
        """Test a common positive rescaling of all profiles keeps every label."""
        profiles = _profiles()
        scaled = [DayProfile(day=p.day, counts=p.counts * factor) for p in profiles]

        base = classify_days(profiles, seed=2, normalization=normalization, n_init=10)
        result = classify_days(scaled, seed=2, normalization=normalization, n_init=10)

        assert result.label_sequence() == base.label_sequence()
        assert result.working_days == base.working_days

    def test_identical_profiles_degenerate(self):
        """Test identical days cannot be split."""
        profiles = [DayProfile(day=d, counts=np.full(48, 5.0)) for d in range(10)]

        with pytest.raises(DegenerateClusteringError):
            classify_days(profiles, seed=0)

    def test_too_few_profiles(self):
        """Test at least two profiles are needed."""
        with pytest.raises(ValidationError):
            classify_days(_profiles(1), seed=0)

    def test_unknown_day(self):
        """Test label_of rejects unclassified days."""
        result = classify_days(_profiles(14), seed=0, n_init=5)

        with pytest.raises(ValidationError):
            result.label_of(99)
