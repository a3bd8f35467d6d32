#!/usr/bin/python
# ------------------------------------------------------------------------
#   test_component_analysis.py
# ------------------------------------------------------------------------

from itertools import combinations

import numpy as np
import pytest

from kl_errors import ParameterError
from kl_graph_model import GraphParams, GraphView, construct_two_type, delete_random_nodes, draw_deleted
from kl_component_analysis import (
    Methods, UnionFind, connected_components, cmax_from_selections, largest_component, is_cut, has_cut_in_range, lemma1_check,
)
from kl_unit_test import hand_view

# ------------------------------------------------------------------------

@pytest.fixture
def three_parts():
    return hand_view( 6, [ ( 1, 2 ), ( 3, 4 ), ( 4, 5 ) ] )

@pytest.mark.parametrize( "method", sorted( Methods ))
def test_hand_built_components( three_parts, method ):
    report = connected_components( three_parts, method=method )
    assert report.component_sizes == ( 3, 2, 1 )
    assert report.cmax == 3
    assert report.outside_count == 3
    assert report.n_effective == 6
    assert report.num_components == 3
    assert list( report.labels ) == [ 0, 1, 1, 2, 2, 2 ]

def test_largest_component( three_parts ):
    assert largest_component( three_parts ) == ( 3, 4, 5 )

def test_largest_component_tie_takes_smallest_id():
    view = hand_view( 4, [ ( 2, 3 ), ( 0, 1 ) ] )
    assert largest_component( view ) == ( 0, 1 )

def test_methods_agree_on_random_graphs( ut ):
    params = GraphParams.two_type( 400, 0.9, 2 )
    for t in range( 10 ):
        g = construct_two_type( params, ut.rng( 0, t ))
        _, view = delete_random_nodes( g, 15, ut.rng( 1, t ))
        reports = [ connected_components( view, method=m ) for m in sorted( Methods ) ]
        for r in reports[1:]:
            assert r == reports[0]
            assert np.array_equal( r.labels, reports[0].labels )

def test_cmax_from_selections( ut ):
    params = GraphParams.two_type( 40, 0.8, 2 )
    for t in range( 30 ):
        g = construct_two_type( params, ut.rng( 0, t ))
        assert cmax_from_selections( g.n, g.sel_src, g.sel_dst ) == connected_components( g.view() ).cmax

        _, view = delete_random_nodes( g, 12, ut.rng( 1, t ))
        _, alive = draw_deleted( g.n, 12, ut.rng( 1, t ))
        assert cmax_from_selections( g.n, g.sel_src, g.sel_dst, alive ) == connected_components( view ).cmax

def test_original_ids_survive_deletion():
    view = GraphView( nodes=( 2, 5, 9 ), edges=( ( 2, 9 ), ) )
    report = connected_components( view )
    assert report.component_sizes == ( 2, 1 )
    assert largest_component( view, report ) == ( 2, 9 )

def test_bad_input( three_parts ):
    with pytest.raises( ParameterError ):
        connected_components( GraphView( nodes=(), edges=() ))
    with pytest.raises( ParameterError ):
        connected_components( three_parts, method='dfs' )

def test_three_nodes_always_connected( ut ):
    params = GraphParams.two_type( 3, 0.5, 2 )
    for t in range( 200 ):
        assert connected_components( construct_two_type( params, ut.rng( 0, t )).view() ).cmax == 3

# ------------------------------------------------------------------------

def test_union_find():
    uf = UnionFind( 5 )
    assert uf.union( 0, 1 )
    assert uf.union( 3, 4 )
    assert not uf.union( 1, 0 )
    assert uf.union( 1, 4 )
    assert uf.num_components == 2
    assert uf.find( 0 ) == uf.find( 3 )
    assert uf.find( 2 ) == 2

# ------------------------------------------------------------------------

def test_is_cut( three_parts ):
    assert is_cut( three_parts, { 1, 2 } )
    assert is_cut( three_parts, { 0 } )
    assert is_cut( three_parts, { 0, 3, 4, 5 } )
    assert not is_cut( three_parts, { 1, 3 } )
    assert not is_cut( three_parts, { 3, 4 } )

def test_is_cut_rejects( three_parts ):
    with pytest.raises( ParameterError, match="non-empty" ):
        is_cut( three_parts, set() )
    with pytest.raises( ParameterError, match="proper subset" ):
        is_cut( three_parts, range( 6 ))
    with pytest.raises( ParameterError, match="within node set" ):
        is_cut( three_parts, { 7 } )

def test_complement_of_cut_is_cut( three_parts ):
    nodes = set( range( 6 ))
    for size in range( 1, 6 ):
        for S in combinations( nodes, size ):
            assert is_cut( three_parts, S ) == is_cut( three_parts, nodes - set( S ))

# ------------------------------------------------------------------------

def test_has_cut_in_range( three_parts ):
    assert has_cut_in_range( three_parts, 1, 1 )
    assert has_cut_in_range( three_parts, 4, 4 )               # 3 + 1
    assert has_cut_in_range( three_parts, 5, 6 )               # 3 + 2, the whole set excluded
    assert not has_cut_in_range( three_parts, 6, 6 )

    path = hand_view( 4, [ ( 0, 1 ), ( 1, 2 ), ( 2, 3 ) ] )
    assert not has_cut_in_range( path, 1, 3 )

    with pytest.raises( ParameterError ):
        has_cut_in_range( three_parts, 3, 2 )
    with pytest.raises( ParameterError ):
        has_cut_in_range( three_parts, 0, 2 )
    with pytest.raises( ParameterError ):
        has_cut_in_range( three_parts, 1, 7 )

def test_cut_search_matches_brute_force( ut ):
    params = GraphParams.two_type( 7, 0.9, 2 )
    for t in range( 40 ):
        view = construct_two_type( params, ut.rng( 0, t )).view()
        sizes = { s for s in range( 1, 7 ) for S in combinations( range( 7 ), s ) if is_cut( view, S ) }
        for lo in range( 1, 8 ):
            for hi in range( lo, 8 ):
                assert has_cut_in_range( view, lo, hi ) == any( lo <= s <= hi for s in sizes )

# ------------------------------------------------------------------------

def test_lemma1_on_random_graphs( ut ):
    params = GraphParams.two_type( 30, 0.5, 2 )
    for t in range( 500 ):
        view = construct_two_type( params, ut.rng( 0, t )).view()
        report = connected_components( view )
        for x in range( 1, 11 ):
            rec = lemma1_check( view, x, report=report )
            assert rec.holds
            if rec.antecedent:
                assert report.outside_count < x

def test_lemma1_range( three_parts ):
    assert lemma1_check( three_parts, 2 ).holds
    with pytest.raises( ParameterError ):
        lemma1_check( three_parts, 3 )

# ------------------------------------------------------------------------
