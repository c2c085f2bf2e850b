"""
Tests for the numerical identity checks
"""

from src.pipeline.identities import (
    check_circular_moments, check_gram, check_migration_identity, run_identity_checks,
)


def test_all_checks_pass():
    checks = run_identity_checks()
    assert [c.name for c in checks] == [
        'circular-moment-0', 'circular-moment-1', 'gram-j0', 'gram-j1', 'music-migration',
    ]
    assert all(c.passed for c in checks), [(c.name, c.max_deviation) for c in checks]


def test_gram_reports_neighbour_overlap():
    zeroth, first = check_gram()
    assert 'M=6' in zeroth.note
    assert '0.304' in zeroth.note
    assert first.passed


def test_too_few_directions_fail():
    zeroth, first = check_circular_moments(n_directions=8)
    assert not zeroth.passed
    assert zeroth.max_deviation > 0.1


def test_migration_identity_on_coarse_grid():
    check = check_migration_identity(resolution=21)
    assert check.passed
    assert 'signal_dim=6' in check.note
