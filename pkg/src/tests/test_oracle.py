#!/usr/bin/python
# ------------------------------------------------------------------------
#   test_oracle.py - Exact cut probabilities against enumeration.
# ------------------------------------------------------------------------

import math

import pytest

from kl_errors import ParameterError, BudgetError
from kl_graph_model import GraphParams, construct_two_type
from kl_component_analysis import connected_components
from kl_oracle import (
    log_binom, cut_probability, exact_cut_probability, exact_cut_probability_deleted,
    cut_union_bound, union_bound_sum, union_bound_sum_deleted,
    exhaustive_probability, exhaustive_event_probability, first_nodes_cut, oracle_agreement,
)

# ------------------------------------------------------------------------

def test_log_binom():
    assert log_binom( 10, 3 ) == pytest.approx( math.log( 120 ))
    assert log_binom( 2, 3 ) == -math.inf
    assert log_binom( 5, 0 ) == 0.0

def test_single_node_never_cut():
    for n in ( 3, 10, 1000 ):
        assert exact_cut_probability( n, 0.5, 2, 1 ) == 0.0
    assert exact_cut_probability_deleted( 100, 0.5, 2, 5, 1 ) > 0.0

def test_hand_computed_value():
    # n=4, r=2, K=2: inside factor (mu/3)^2, outside factor the same
    mu = 0.6
    expected = ( mu / 3 ) ** 4
    assert exact_cut_probability( 4, mu, 2, 2 ) == pytest.approx( expected, rel=1e-12 )

def test_zero_deletion_reduces():
    for r in range( 1, 20 ):
        assert exact_cut_probability_deleted( 40, 0.7, 3, 0, r ) == exact_cut_probability( 40, 0.7, 3, r )
    assert union_bound_sum_deleted( 40, 0.7, 3, 0, 4 ).raw_sum == union_bound_sum( 40, 0.7, 3, 4 ).raw_sum

# ------------------------------------------------------------------------

@pytest.mark.parametrize( "n, mu, k, d", [
    ( 4, 0.5, 2, 0 ),
    ( 5, 0.5, 2, 0 ),
    ( 5, 0.25, 3, 1 ),
    ( 6, 0.9, 2, 1 ),
    ( 6, 0.75, 2, 2 ),
])
def test_exact_matches_enumeration( n, mu, k, d ):
    rows = oracle_agreement( n, mu, k, d )
    assert [ row.r for row in rows ] == list( range( 1, n - d ))
    for row in rows:
        assert row.abs_diff < 1e-12, row

def test_first_nodes_predicate_direct():
    p = exhaustive_event_probability( 5, 0.5, 2, 0, first_nodes_cut( 2 ))
    assert p == pytest.approx( exact_cut_probability( 5, 0.5, 2, 2 ), abs=1e-12 )

def test_r_type_matches_enumeration():
    params = GraphParams( 6, ( 0.5, 0.3, 0.2 ), ( 1, 2, 3 ))
    for r in range( 1, 5 ):
        p = exhaustive_probability( params, 0, first_nodes_cut( r ))
        assert p == pytest.approx( cut_probability( params, r ), abs=1e-12 )

def test_small_graph_always_connected():
    p = exhaustive_event_probability( 3, 0.5, 2, 0, lambda view: connected_components( view ).cmax == 3 )
    assert p == pytest.approx( 1.0, abs=1e-12 )

def test_enumeration_budget():
    with pytest.raises( BudgetError ):
        exhaustive_event_probability( 8, 0.5, 2, 0, first_nodes_cut( 1 ))
    with pytest.raises( BudgetError ):
        oracle_agreement( 8, 0.5, 2 )

# ------------------------------------------------------------------------
#   The union sum bounds P[ |C_max| <= n - M ] for M <= n/3.

@pytest.mark.parametrize( "mu, k", [ ( 0.9, 2 ), ( 0.5, 3 ) ] )
def test_union_bound_is_sound_on_tiny_graphs( mu, k ):
    n = 6
    for m in ( 1, 2 ):
        p = exhaustive_event_probability( n, mu, k, 0, lambda view: connected_components( view ).cmax <= n - m )
        assert p <= union_bound_sum( n, mu, k, m ).raw_sum + 1e-12

def test_enumeration_agrees_with_sampling( ut ):
    n, mu, k, trials = 6, 0.9, 2, 20_000
    params = GraphParams.two_type( n, mu, k )

    exact = exhaustive_event_probability( n, mu, k, 0, lambda view: connected_components( view ).cmax >= n - 1 )
    hits = sum( connected_components( construct_two_type( params, ut.rng( 0, t )).view() ).cmax >= n - 1
                for t in range( trials ))

    sigma = math.sqrt( exact * ( 1 - exact ) / trials )
    assert abs( hits / trials - exact ) < 4 * sigma + 1e-3

# ------------------------------------------------------------------------

def test_monotone_in_r_and_m():
    bound = union_bound_sum( 200, 0.9, 2, 1 )
    assert all( t >= 0 for t in bound.terms )
    sums = [ union_bound_sum( 200, 0.9, 2, m ).raw_sum for m in range( 1, 40 ) ]
    assert all( a >= b for a, b in zip( sums, sums[1:] ))

def test_monotone_in_mu_and_k():
    for r in ( 2, 5, 10 ):
        by_mu = [ exact_cut_probability( 100, mu, 2, r ) for mu in ( 0.1, 0.5, 0.9 ) ]
        assert by_mu[0] <= by_mu[1] <= by_mu[2]
        by_k = [ exact_cut_probability( 100, 0.7, k, r ) for k in ( 2, 3, 5 ) ]
        assert by_k[0] >= by_k[1] >= by_k[2]

def test_sum_monotone_in_mu_and_k():
    for m in ( 2, 5 ):
        by_mu = [ union_bound_sum( 100, mu, 2, m ).raw_sum for mu in ( 0.1, 0.5, 0.9 ) ]
        assert by_mu[0] <= by_mu[1] <= by_mu[2]
        by_k = [ union_bound_sum( 100, 0.7, k, m ).raw_sum for k in ( 2, 3, 5 ) ]
        assert by_k[0] >= by_k[1] >= by_k[2]

def test_monotone_in_d():
    values = [ exact_cut_probability_deleted( 100, 0.8, 2, d, 3 ) for d in range( 0, 20 ) ]
    assert all( a <= b for a, b in zip( values, values[1:] ))

    sums = [ union_bound_sum_deleted( 200, 0.5, 2, d, 2 ).raw_sum for d in range( 0, 40 ) ]
    assert all( a <= b for a, b in zip( sums, sums[1:] ))

def test_bound_below_one_at_large_n():
    b = union_bound_sum( 5000, 0.9, 2, 60 )
    assert 0.0 < b.value < 1.0
    assert b.value == b.raw_sum
    assert b.r_first == 60 and b.r_values[-1] == 2500

def test_bound_is_clamped():
    b = union_bound_sum_deleted( 20, 0.99, 2, 15, 1 )          # five survivors, deleted nodes absorb picks
    assert b.raw_sum > 1.0
    assert b.value == 1.0

def test_log_and_float64_agree():
    for n, mu, k, d in ( ( 40, 0.9, 2, 0 ), ( 60, 0.5, 3, 4 ) ):
        params = GraphParams.two_type( n, mu, k )
        for r in range( 1, n - d ):
            a = cut_probability( params, r, d=d, mode='log' )
            b = cut_probability( params, r, d=d, mode='float64' )
            assert a == pytest.approx( b, rel=1e-9, abs=1e-300 )

        lo = cut_union_bound( params, 2, d=d, mode='log' )
        hi = cut_union_bound( params, 2, d=d, mode='float64' )
        assert lo.raw_sum == pytest.approx( hi.raw_sum, rel=1e-9 )
        assert hi.arithmetic_mode == 'float64'

# ------------------------------------------------------------------------

def test_preconditions():
    params = GraphParams.two_type( 20, 0.5, 2 )
    with pytest.raises( ParameterError, match="1 <= r <= n-d-1" ):
        cut_probability( params, 20 )
    with pytest.raises( ParameterError ):
        cut_probability( params, 0 )
    with pytest.raises( ParameterError, match="0 <= d < n" ):
        cut_probability( params, 1, d=20 )
    with pytest.raises( ParameterError ):
        cut_probability( params, 1, mode='decimal' )
    with pytest.raises( ParameterError, match="floor" ):
        cut_union_bound( params, 11 )
    with pytest.raises( ParameterError ):
        cut_union_bound( params, 9, d=4 )
    with pytest.raises( ParameterError, match="K_r < n" ):
        exact_cut_probability( 3, 0.5, 3, 1 )

# ------------------------------------------------------------------------
