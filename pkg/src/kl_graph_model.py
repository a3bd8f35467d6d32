#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_graph_model.py - Inhomogeneous random K-out graphs.

#   Every node is typed independently, type-i with probability mu_i, and a
#       type-i node selects K_i distinct other nodes uniformly at random.
#       Nodes i and j are adjacent when either selected the other; the
#       orientation of a selection is discarded once the edge exists.

#   Node ids are dense 0-based integers. Deletion keeps the original ids so
#       a deleted set and a surviving subgraph can be cross-referenced.

#   Graphs are immutable after construction. Randomness always comes in as a
#       numpy Generator, see kl_experiments.trial_rng().
# ---------------------------------------------------------------------------

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from kl_constants import Const
from kl_errors import ParameterError

log = logging.getLogger( __name__ )

# ---------------------------------------------------------------------------
#   Shared checks on the (mu_1..mu_r, K_1..K_r) vectors. Usable without n,
#       kl_bounds.py needs them for the asymptotic expressions.

def validate_type_vectors( type_probs, type_selections ):
    probs = tuple( float( x ) for x in type_probs )
    ks = tuple( int( x ) for x in type_selections )

    if len( probs ) < 2:
        raise ParameterError( "r >= 2", f"need at least two node types, got {len( probs )}" )

    if len( probs ) != len( ks ):
        raise ParameterError( "len(mu) == len(K)", f"{len( probs )} type probabilities but {len( ks )} selection counts" )

    if any( not ( 0.0 < p < 1.0 ) for p in probs ):
        raise ParameterError( "0 < mu_i < 1", f"type probabilities must lie strictly between 0 and 1, got {list( probs )}" )

    if abs( math.fsum( probs ) - 1.0 ) > Const.Sum_Tolerance:
        raise ParameterError( "sum(mu) == 1", f"type probabilities sum to {math.fsum( probs )!r}" )

    if ks[0] < 1:
        raise ParameterError( "K_1 >= 1", f"smallest selection count is {ks[0]}" )

    if any( b <= a for a, b in zip( ks, ks[1:] )):
        raise ParameterError( "K_1 < K_2 < ... < K_r", f"selection counts must be strictly increasing, got {list( ks )}" )

    return probs, ks

# ---------------------------------------------------------------------------

@dataclass( frozen=True )
class GraphParams:
    n: int
    type_probs: tuple
    type_selections: tuple

    def __post_init__( self ):
        probs, ks = validate_type_vectors( self.type_probs, self.type_selections )
        object.__setattr__( self, 'type_probs', probs )
        object.__setattr__( self, 'type_selections', ks )

        if int( self.n ) != self.n or self.n < 2:
            raise ParameterError( "n >= 2", f"node count must be an integer >= 2, got {self.n}" )
        object.__setattr__( self, 'n', int( self.n ))

        if ks[-1] >= self.n:
            raise ParameterError( "K_r < n", f"largest selection count {ks[-1]} must be below n={self.n}" )

    # -----------------------------------------------------------------------
    #   The two-type ensemble: type-1 picks one node w.p. mu, type-2 picks K.

    @classmethod
    def two_type( cls, n, mu, k ):
        if not ( 0.0 < mu < 1.0 ):
            raise ParameterError( "0 < mu < 1", f"mu must lie strictly between 0 and 1, got {mu}" )
        if int( k ) != k or k < 2:
            raise ParameterError( "K >= 2", f"type-2 selection count must be an integer >= 2, got {k}" )
        return cls( n, ( mu, 1.0 - mu ), ( 1, int( k )))

    @property
    def r( self ):
        return len( self.type_probs )

    @property
    def is_two_type( self ):
        return self.r == 2 and self.type_selections[0] == 1

    @property
    def mu( self ):
        return self.type_probs[0]

    @property
    def k( self ):
        return self.type_selections[-1]

    @property
    def avg_selections( self ):
        return math.fsum( p * k for p, k in zip( self.type_probs, self.type_selections ))

    def as_dict( self ):
        return { 'n' : self.n, 'mu' : list( self.type_probs ), 'K' : list( self.type_selections ) }

# ---------------------------------------------------------------------------
#   A set of surviving nodes and the edges among them. Used for a full graph
#       and for an induced subgraph after deletion alike.

#   nodes - sorted original ids.
#   edges - (u, v) pairs with u < v, both endpoints in nodes. Either a numpy
#           (E, 2) array or a sequence of tuples, kl_oracle.py builds many
#           tiny views from tuples and should not pay for numpy.

@dataclass( frozen=True, eq=False )
class GraphView:
    nodes: object
    edges: object

    @property
    def n_effective( self ):
        return len( self.nodes )

    @cached_property
    def node_array( self ):
        return np.asarray( self.nodes, dtype=np.int64 )

    @cached_property
    def edge_array( self ):
        return np.asarray( self.edges, dtype=np.int64 ).reshape( -1, 2 )

    @cached_property
    def edge_pairs( self ):
        if isinstance( self.edges, np.ndarray ):
            return [ ( int( u ), int( v )) for u, v in self.edges ]
        return self.edges

    @property
    def num_edges( self ):
        return len( self.edges )

    # -----------------------------------------------------------------------
    #   Position of each original id in self.nodes.

    def local_index( self, ids ):
        return np.searchsorted( self.node_array, ids )

    @cached_property
    def csr( self ):
        m = self.n_effective
        e = self.local_index( self.edge_array )
        rows = np.concatenate(( e[:, 0], e[:, 1] ))
        cols = np.concatenate(( e[:, 1], e[:, 0] ))
        data = np.ones( len( rows ), dtype=np.int8 )
        return sparse.csr_matrix(( data, ( rows, cols )), shape=( m, m ))

    # -----------------------------------------------------------------------
    #   Sorted neighbour lists keyed by original id.

    @cached_property
    def neighbors( self ):
        adj = { int( u ): [] for u in self.nodes }
        for u, v in self.edge_pairs:
            adj[u].append( v )
            adj[v].append( u )
        return { u: sorted( nbrs ) for u, nbrs in adj.items() }

    @cached_property
    def degrees( self ):
        return np.diff( self.csr.indptr )

# ---------------------------------------------------------------------------
#   A realized graph.

#   The selections are kept as two parallel arrays, node sel_src[j] selected
#       node sel_dst[j]. The selection set of i is sel_dst[ sel_src == i ].

@dataclass( frozen=True, eq=False )
class KoutGraph:
    params: GraphParams
    node_types: np.ndarray
    sel_src: np.ndarray
    sel_dst: np.ndarray

    def __post_init__( self ):
        for arr in ( self.node_types, self.sel_src, self.sel_dst ):
            arr.setflags( write=False )

    @property
    def n( self ):
        return self.params.n

    # -----------------------------------------------------------------------

    @cached_property
    def _selection_order( self ):
        order = np.argsort( self.sel_src, kind='stable' )
        bounds = np.searchsorted( self.sel_src[ order ], np.arange( self.n + 1 ))
        return order, bounds

    def selection( self, i ):
        order, bounds = self._selection_order
        return tuple( sorted( int( x ) for x in self.sel_dst[ order[ bounds[i] : bounds[i+1] ]] ))

    @cached_property
    def selections( self ):
        return tuple( self.selection( i ) for i in range( self.n ))

    # -----------------------------------------------------------------------
    #   Undirected edge set, each edge once as (u, v) with u < v, ascending.

    @cached_property
    def edges( self ):
        pairs = np.sort( np.stack(( self.sel_src, self.sel_dst ), axis=1 ), axis=1 )
        if len( pairs ) == 0:
            return pairs.reshape( 0, 2 )
        edges = np.unique( pairs, axis=0 )
        edges.setflags( write=False )
        return edges

    @cached_property
    def edge_codes( self ):
        return self.edges[:, 0] * self.n + self.edges[:, 1]

    def has_edge( self, i, j ):
        u, v = min( i, j ), max( i, j )
        code = u * self.n + v
        pos = np.searchsorted( self.edge_codes, code )
        return bool( pos < len( self.edge_codes ) and self.edge_codes[ pos ] == code )

    @cached_property
    def degrees( self ):
        return np.bincount( self.edges.ravel(), minlength=self.n )

    def view( self ):
        return GraphView( nodes=np.arange( self.n, dtype=np.int64 ), edges=self.edges )

# ---------------------------------------------------------------------------

@dataclass( frozen=True )
class DeletionSpec:
    n: int
    d_n: int
    deleted_set: tuple

    @property
    def n_surviving( self ):
        return self.n - self.d_n

# ===========================================================================
#   Sampling
# ===========================================================================
#   Floyd's algorithm, vectorized across rows: m independent uniform k-subsets
#       of range(pool). For j = pool-k .. pool-1 draw t in [0, j]; if t was
#       already taken this row takes j instead. Exactly uniform, O(k^2) numpy
#       passes regardless of pool size.

def floyd_sample_rows( rng, m, pool, k ):
    picks = np.empty(( m, k ), dtype=np.int64 )
    for col, j in enumerate( range( pool - k, pool )):
        t = rng.integers( 0, j + 1, size=m )
        if col:
            taken = ( picks[:, :col] == t[:, None] ).any( axis=1 )
            t = np.where( taken, j, t )
        picks[:, col] = t
    return picks

# ---------------------------------------------------------------------------

def assign_types( params, rng ):
    cum = np.cumsum( params.type_probs )
    cum[-1] = 1.0
    u = rng.random( params.n )
    types = np.searchsorted( cum, u, side='right' )
    return np.minimum( types, params.r - 1 ).astype( np.int64 )

# ---------------------------------------------------------------------------
#   Selections for every node given its type. Types are processed in index
#       order so one seed always yields one graph, whichever constructor
#       the caller used.

def _draw_selections( params, node_types, rng ):
    n = params.n
    srcs = []
    dsts = []

    for t, k in enumerate( params.type_selections ):
        nodes = np.flatnonzero( node_types == t )
        if len( nodes ) == 0:
            continue

        picks = floyd_sample_rows( rng, len( nodes ), n - 1, k )
        picks += picks >= nodes[:, None]            # candidates skip the node itself

        srcs.append( np.repeat( nodes, k ))
        dsts.append( picks.ravel() )

    if not srcs:
        return np.empty( 0, dtype=np.int64 ), np.empty( 0, dtype=np.int64 )

    return np.concatenate( srcs ), np.concatenate( dsts )

# ---------------------------------------------------------------------------

def construct_r_type( params, rng ):
    node_types = assign_types( params, rng )
    sel_src, sel_dst = _draw_selections( params, node_types, rng )
    return KoutGraph( params, node_types, sel_src, sel_dst )

# ---------------------------------------------------------------------------

def construct_two_type( params, rng ):
    if params.r != 2:
        raise ParameterError( "r == 2", f"two-type construction got {params.r} node types" )

    if params.type_selections[0] != 1:
        raise ParameterError( "K_1 = 1", f"type-1 nodes must select exactly one node, got {params.type_selections[0]}" )

    if params.type_selections[1] < 2:
        raise ParameterError( "K >= 2", f"type-2 nodes must select at least two nodes, got {params.type_selections[1]}" )

    return construct_r_type( params, rng )

# ---------------------------------------------------------------------------
#   The deleted ids, sorted, and the survivor mask. Shared by the fast
#       small-graph path in kl_experiments.py so both consume rng alike.

def draw_deleted( n, d_n, rng ):
    deleted = np.sort( rng.choice( n, size=d_n, replace=False )) if d_n else np.empty( 0, dtype=np.int64 )
    alive = np.ones( n, dtype=bool )
    alive[ deleted ] = False
    return deleted, alive

#   Remove d_n nodes chosen uniformly among all size-d_n subsets. The graph
#       itself is untouched, the surviving part comes back as a GraphView.

def delete_random_nodes( g, d_n, rng ):
    n = g.n
    if int( d_n ) != d_n or not ( 0 <= d_n < n ):
        raise ParameterError( "0 <= d_n < n", f"cannot delete {d_n} of {n} nodes" )
    d_n = int( d_n )

    deleted, alive = draw_deleted( n, d_n, rng )

    edges = g.edges
    keep = alive[ edges[:, 0] ] & alive[ edges[:, 1] ]

    spec = DeletionSpec( n=n, d_n=d_n, deleted_set=tuple( int( x ) for x in deleted ))
    view = GraphView( nodes=np.flatnonzero( alive ), edges=edges[ keep ] )
    return spec, view

# ===========================================================================
#   Coupling a two-type graph into an r-type one.
# ===========================================================================
#   g2 comes from the two-type ensemble with mu~ = mu_1 + ... + mu_{r-1} and
#       K = K_r. Each type-1 node of g2 becomes type-i (i < r) with
#       probability mu_i / mu~, and a node that became type-i picks K_i - 1
#       further nodes it did not pick before. Edges only get added, and the
#       result has the r-type law.

#   Extra picks are drawn by rejection: uniform over all n nodes, redrawn
#       while equal to the node itself or to one of its own earlier picks.
#       Nodes that selected it are not excluded.

def couple_extend( g2, target, rng ):
    base = g2.params

    if not base.is_two_type:
        raise ParameterError( "two-type input", "coupling starts from a two-type graph with K_1 = 1" )

    if target.n != base.n:
        raise ParameterError( "same n", f"input has n={base.n}, target has n={target.n}" )

    if target.type_selections[0] != 1:
        raise ParameterError( "target K_1 = 1", f"target's first selection count is {target.type_selections[0]}" )

    mu_tilde = math.fsum( target.type_probs[:-1] )
    if abs( base.mu - mu_tilde ) > Const.Sum_Tolerance:
        raise ParameterError( "mu = mu_1 + ... + mu_{r-1}", f"input mu={base.mu!r} does not match target mu~={mu_tilde!r}" )

    if base.k != target.k:
        raise ParameterError( "K = K_r", f"input K={base.k} does not match target K_r={target.k}" )

    if target.r == 2:
        return KoutGraph( target, g2.node_types, g2.sel_src, g2.sel_dst )

    n = target.n
    r = target.r

    # ----------------------------------------------
    #   Retype. Type-2 nodes of g2 are the target's type-r.

    new_types = np.full( n, r - 1, dtype=np.int64 )
    low = np.flatnonzero( g2.node_types == 0 )

    cum = np.cumsum( [ p / mu_tilde for p in target.type_probs[:-1] ] )
    cum[-1] = 1.0
    u = rng.random( len( low ))
    new_types[ low ] = np.minimum( np.searchsorted( cum, u, side='right' ), r - 2 )

    # ----------------------------------------------
    #   The single earlier pick of every type-1 node of g2.

    first_pick = np.full( n, -1, dtype=np.int64 )
    single = g2.node_types[ g2.sel_src ] == 0
    first_pick[ g2.sel_src[ single ]] = g2.sel_dst[ single ]

    srcs = [ g2.sel_src ]
    dsts = [ g2.sel_dst ]

    for t in range( 1, r - 1 ):
        nodes = np.flatnonzero( new_types == t )
        extra = target.type_selections[t] - 1
        if len( nodes ) == 0:
            continue

        chosen = np.empty(( len( nodes ), extra + 1 ), dtype=np.int64 )
        chosen[:, 0] = first_pick[ nodes ]

        for col in range( 1, extra + 1 ):
            cand = rng.integers( 0, n, size=len( nodes ))
            bad = ( cand == nodes ) | ( chosen[:, :col] == cand[:, None] ).any( axis=1 )
            while bad.any():
                idx = np.flatnonzero( bad )
                cand[ idx ] = rng.integers( 0, n, size=len( idx ))
                bad[ idx ] = ( cand[ idx ] == nodes[ idx ] ) | ( chosen[ idx, :col ] == cand[ idx, None ] ).any( axis=1 )
            chosen[:, col] = cand

        srcs.append( np.repeat( nodes, extra ))
        dsts.append( chosen[:, 1:].ravel() )

    log.debug( "coupled n=%d r=%d retyped=%d", n, r, len( low ))
    return KoutGraph( target, new_types, np.concatenate( srcs ), np.concatenate( dsts ))

# ---------------------------------------------------------------------------
