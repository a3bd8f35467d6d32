#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_component_analysis.py - Connected components and cuts.

#   A connected component is a maximal set of mutually reachable nodes. A cut
#       is a non-empty proper subset of the nodes with no edge to the rest.
#       Every component is a cut, a cut is a union of whole components, and
#       the complement of a cut is a cut.

#   All functions take a kl_graph_model.GraphView and do not modify it.
# ---------------------------------------------------------------------------

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from kl_errors import ParameterError

# ---------------------------------------------------------------------------
#   component_sizes is sorted largest first. labels[i] is the component of
#       view.nodes[i]; labels are numbered in order of first appearance so
#       all three methods below give identical reports.

@dataclass( frozen=True )
class ComponentReport:
    component_sizes: tuple
    cmax: int
    outside_count: int
    n_effective: int
    labels: np.ndarray = field( repr=False, compare=False )

    @property
    def num_components( self ):
        return len( self.component_sizes )

    def as_dict( self ):
        return {
            'n_effective' :     self.n_effective,
            'cmax' :            self.cmax,
            'outside_count' :   self.outside_count,
            'num_components' :  self.num_components,
            'component_sizes' : list( self.component_sizes ),
        }

# ---------------------------------------------------------------------------
#   Union-find with path compression and union by size.

class UnionFind:
    def __init__( self, size ):
        self.parent = list( range( size ))
        self.size = [1] * size
        self.num_components = size

    def find( self, a ):
        root = a
        while root != self.parent[ root ]:
            root = self.parent[ root ]

        while a != root:                        # compress
            nxt = self.parent[a]
            self.parent[a] = root
            a = nxt
        return root

    def union( self, a, b ):
        ra = self.find( a )
        rb = self.find( b )
        if ra == rb:
            return False

        if self.size[ ra ] < self.size[ rb ]:
            ra, rb = rb, ra
        self.parent[ rb ] = ra
        self.size[ ra ] += self.size[ rb ]
        self.num_components -= 1
        return True

# ---------------------------------------------------------------------------
#   Three ways to label components, all over local indices 0..m-1.

def _labels_csgraph( view ):
    _, labels = csgraph.connected_components( view.csr, directed=False )
    return labels

def _labels_union_find( view ):
    m = view.n_effective
    uf = UnionFind( m )
    local = view.local_index( view.edge_array )
    for u, v in local:
        uf.union( int( u ), int( v ))
    return np.array( [ uf.find( i ) for i in range( m ) ], dtype=np.int64 )

def _labels_bfs( view ):
    m = view.n_effective
    indptr, indices = view.csr.indptr, view.csr.indices
    labels = np.full( m, -1, dtype=np.int64 )
    current = 0

    for start in range( m ):
        if labels[ start ] >= 0:
            continue
        labels[ start ] = current
        queue = deque( [ start ] )
        while queue:
            u = queue.popleft()
            for v in indices[ indptr[u] : indptr[u+1] ]:
                if labels[v] < 0:
                    labels[v] = current
                    queue.append( v )
        current += 1

    return labels

Methods = {
    'csgraph' :     _labels_csgraph,
    'union_find' :  _labels_union_find,
    'bfs' :         _labels_bfs,
}

# ---------------------------------------------------------------------------
#   Renumber arbitrary labels 0, 1, 2, ... in order of first appearance.

def _canonical_labels( raw ):
    _, first, inverse = np.unique( raw, return_index=True, return_inverse=True )
    rank = np.empty( len( first ), dtype=np.int64 )
    rank[ np.argsort( first ) ] = np.arange( len( first ))
    return rank[ inverse.ravel() ]

# ---------------------------------------------------------------------------

def connected_components( view, method='csgraph' ):
    if view.n_effective < 1:
        raise ParameterError( "at least one node", "connected components of an empty graph" )

    if method not in Methods:
        raise ParameterError( f"method in {sorted( Methods )}", f"unknown component method '{method}'" )

    labels = _canonical_labels( Methods[ method ]( view ))
    sizes = np.bincount( labels )
    cmax = int( sizes.max() )

    return ComponentReport(
        component_sizes =   tuple( sorted(( int( x ) for x in sizes ), reverse=True )),
        cmax =              cmax,
        outside_count =     view.n_effective - cmax,
        n_effective =       view.n_effective,
        labels =            labels,
    )

# ---------------------------------------------------------------------------
#   |C_max| straight from the selection arrays of a graph on nodes 0..n-1,
#       alive masks deleted nodes. For small n, where building the edge
#       set and a sparse matrix per graph costs more than the search.

def cmax_from_selections( n, sel_src, sel_dst, alive=None ):
    uf = UnionFind( n )

    if alive is None:
        for u, v in zip( sel_src.tolist(), sel_dst.tolist() ):
            uf.union( u, v )
        survivors = range( n )
    else:
        keep = alive[ sel_src ] & alive[ sel_dst ]
        for u, v in zip( sel_src[ keep ].tolist(), sel_dst[ keep ].tolist() ):
            uf.union( u, v )
        survivors = np.flatnonzero( alive ).tolist()

    return max( uf.size[ uf.find( i ) ] for i in survivors )

# ---------------------------------------------------------------------------
#   Node ids of C_max. With ties, the component containing the smallest id.

def largest_component( view, report=None ):
    report = report or connected_components( view )
    sizes = np.bincount( report.labels )
    best = int( np.flatnonzero( sizes == report.cmax )[0] )
    return tuple( int( x ) for x in view.node_array[ report.labels == best ] )

# ---------------------------------------------------------------------------

def is_cut( view, S ):
    S = set( int( x ) for x in S )
    nodes = set( int( x ) for x in view.nodes )

    if not S:
        raise ParameterError( "S non-empty", "a cut must contain at least one node" )

    if not S <= nodes:
        raise ParameterError( "S within node set", f"nodes {sorted( S - nodes )[:5]} are not in the graph" )

    if len( S ) == len( nodes ):
        raise ParameterError( "S proper subset", "a cut cannot contain every node" )

    return not any(( u in S ) != ( v in S ) for u, v in view.edge_pairs )

# ---------------------------------------------------------------------------
#   Is there a cut with lo <= |S| <= hi ?

#   A cut is a union of whole components and any union of components other
#       than all of them is a cut, so this is subset-sum over component
#       sizes. A python int serves as the bitset: bit s set <=> some union
#       of components has s nodes.

def has_cut_in_range( view, lo, hi, report=None ):
    m = view.n_effective
    if not ( 1 <= lo <= hi <= m ):
        raise ParameterError( "1 <= lo <= hi <= n_effective", f"range [{lo}, {hi}] with n_effective={m}" )

    report = report or connected_components( view )

    hi = min( hi, m - 1 )                   # the whole node set is not a cut
    if hi < lo:
        return False

    reach = 1
    for size in report.component_sizes:
        reach |= reach << size

    window = (( 1 << ( hi + 1 )) - 1 ) ^ (( 1 << lo ) - 1 )
    return bool( reach & window )

# ---------------------------------------------------------------------------
#   If no cut has size in [x, n-x] then C_max has more than n-x nodes, for
#       x <= n/3. Both sides are evaluated, used only to exercise that claim.

@dataclass( frozen=True )
class Lemma1Record:
    x: int
    n_effective: int
    antecedent: bool            # no cut with size in [x, n - x]
    consequent: bool            # cmax > n - x
    holds: bool

def lemma1_check( view, x, report=None ):
    m = view.n_effective
    if not ( 1 <= x <= m // 3 ):
        raise ParameterError( "1 <= x <= n_effective/3", f"x={x} with n_effective={m}" )

    report = report or connected_components( view )
    antecedent = not has_cut_in_range( view, x, m - x, report=report )
    consequent = report.cmax > m - x

    return Lemma1Record( x=x, n_effective=m, antecedent=antecedent, consequent=consequent,
                         holds=( not antecedent ) or consequent )

# ---------------------------------------------------------------------------
