#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_oracle.py - Exact finite-n probabilities.

#   cut(r) is the event that a fixed set S of r nodes is a cut. Nodes are
#       typed and select independently, so P[cut(r)] is a product of
#       per-node factors: a node in S must pick only inside S, a node
#       outside must pick only outside. A type-i node picks only inside a
#       set of a available others with probability C(a, K_i) / C(n-1, K_i),
#       which is a / (n-1) for the single-pick type.

#   With d deleted nodes, S is r surviving nodes and the deleted nodes are
#       unconstrained: nodes in S may pick inside S or D (a = r + d - 1),
#       surviving nodes outside S must avoid S (a = n - r - 1).

#   Summing C(n, r) P[cut(r)] over r >= M bounds the probability that any
#       cut with size in [M, n - M] exists, hence P[|C_max| <= n - M].

#   Products are computed as exp of sums of logs, log-binomials from
#       gammaln. C(a, b) is 0 when a < b.

#   exhaustive_event_probability() is the check on all of the above: it
#       enumerates every type vector, selection tuple and deletion set of a
#       tiny graph.
# ---------------------------------------------------------------------------

from __future__ import annotations

import math
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.special import gammaln

from kl_constants import Const
from kl_errors import ParameterError, BudgetError
from kl_graph_model import GraphParams, GraphView

log = logging.getLogger( __name__ )

Modes = ( 'log', 'float64' )

# ---------------------------------------------------------------------------

@dataclass( frozen=True )
class BoundEvaluation:
    value: float                # min(1, raw_sum)
    raw_sum: float
    terms: tuple                # C(n', r) P[cut(r)] for r = r_first, r_first + 1, ...
    r_first: int
    arithmetic_mode: str

    @property
    def r_values( self ):
        return range( self.r_first, self.r_first + len( self.terms ))

    def as_dict( self ):
        return {
            'value' :           self.value,
            'raw_sum' :         self.raw_sum,
            'r_first' :         self.r_first,
            'r_last' :          self.r_first + len( self.terms ) - 1,
            'arithmetic_mode' : self.arithmetic_mode,
        }

# ---------------------------------------------------------------------------
#   log C(a, b), -inf where a < b. Vectorized.

def log_binom( a, b ):
    a = np.asarray( a, dtype=np.float64 )
    b = np.asarray( b, dtype=np.float64 )
    ok = ( b >= 0 ) & ( a >= b )
    a_ok = np.where( ok, a, 0.0 )
    b_ok = np.where( ok, b, 0.0 )
    val = gammaln( a_ok + 1 ) - gammaln( b_ok + 1 ) - gammaln( a_ok - b_ok + 1 )
    return np.where( ok, val, -np.inf )

# ---------------------------------------------------------------------------
#   log P[ a node picks only among 'avail' particular others ], averaged over
#       its type.

def _log_stay_within( n, probs, ks, avail ):
    avail = np.asarray( avail, dtype=np.float64 )
    parts = [ math.log( p ) + log_binom( avail, k ) - log_binom( n - 1, k ) for p, k in zip( probs, ks ) ]
    return np.logaddexp.reduce( np.stack( parts ), axis=0 )

def _times( count, logp ):
    return np.where( count == 0, 0.0, count * logp )

def _log_cut( params, d, r ):
    n = params.n
    probs, ks = params.type_probs, params.type_selections
    r = np.asarray( r, dtype=np.float64 )

    inside = _log_stay_within( n, probs, ks, r + d - 1 )
    outside = _log_stay_within( n, probs, ks, n - r - 1 )
    return _times( r, inside ) + _times( n - d - r, outside )

# ---------------------------------------------------------------------------
#   Same product in plain float64 with exact integer binomials. For the
#       agreement check against the log form, and small n only.

def _direct_cut( params, d, r ):
    n = params.n
    probs, ks = params.type_probs, params.type_selections

    def stay( avail ):
        return sum( p * math.comb( avail, k ) / math.comb( n - 1, k ) for p, k in zip( probs, ks ))

    return stay( r + d - 1 ) ** r * stay( n - r - 1 ) ** ( n - d - r )

# ---------------------------------------------------------------------------

def _check_mode( mode ):
    if mode not in Modes:
        raise ParameterError( f"mode in {Modes}", f"unknown arithmetic mode '{mode}'" )

def _check_deletion( n, d ):
    if int( d ) != d or not ( 0 <= d < n ):
        raise ParameterError( "0 <= d < n", f"d={d} with n={n}" )

def _check_r( n, d, r ):
    if int( r ) != r or not ( 1 <= r <= n - d - 1 ):
        raise ParameterError( "1 <= r <= n-d-1", f"r={r} with n={n}, d={d}" )

# ---------------------------------------------------------------------------
#   General form, any number of node types.

def cut_probability( params, r, d=0, mode='log' ):
    _check_mode( mode )
    _check_deletion( params.n, d )
    _check_r( params.n, d, r )

    if mode == 'float64':
        return float( _direct_cut( params, int( d ), int( r )))
    return float( np.exp( _log_cut( params, int( d ), int( r ))))

# ---------------------------------------------------------------------------

def exact_cut_probability( n, mu, k, r, mode='log' ):
    params = GraphParams.two_type( n, mu, k )
    return cut_probability( params, r, d=0, mode=mode )

def exact_cut_probability_deleted( n, mu, k, d, r, mode='log' ):
    params = GraphParams.two_type( n, mu, k )
    return cut_probability( params, r, d=d, mode=mode )

# ---------------------------------------------------------------------------
#   sum_{r=lo}^{floor((n-d)/2)} C(n-d, r) P[cut(r)] with d deleted

def cut_union_bound( params, lo, d=0, mode='log' ):
    _check_mode( mode )
    _check_deletion( params.n, d )

    m = params.n - d
    hi = m // 2
    if int( lo ) != lo or not ( 1 <= lo <= hi ):
        raise ParameterError( "1 <= M <= floor((n-d)/2)", f"lower limit {lo} with n-d={m}" )
    lo = int( lo )

    if mode == 'float64':
        terms = [ math.comb( m, r ) * _direct_cut( params, d, r ) for r in range( lo, hi + 1 ) ]
    else:
        r = np.arange( lo, hi + 1 )
        terms = np.exp( log_binom( m, r ) + _log_cut( params, d, r )).tolist()

    raw = math.fsum( terms )
    return BoundEvaluation( value=min( 1.0, raw ), raw_sum=raw, terms=tuple( terms ), r_first=lo, arithmetic_mode=mode )

# ---------------------------------------------------------------------------

def union_bound_sum( n, mu, k, m, mode='log' ):
    return cut_union_bound( GraphParams.two_type( n, mu, k ), m, d=0, mode=mode )

def union_bound_sum_deleted( n, mu, k, d, x, mode='log' ):
    return cut_union_bound( GraphParams.two_type( n, mu, k ), x, d=d, mode=mode )

# ===========================================================================
#   Exhaustive enumeration
# ===========================================================================
#   Law of the undirected edge set of a tiny graph. Every node outcome (type
#       and selection set) is enumerated with its probability; outcomes of
#       successive nodes are combined, merging those that give the same edge
#       set. Returns ( (edges, probability), ... ) with edges as (u, v) tuples.

@lru_cache( maxsize=32 )
def _edge_law( params ):
    n = params.n
    pairs = list( combinations( range( n ), 2 ))
    bit = { pair: 1 << i for i, pair in enumerate( pairs ) }

    law = { 0 : 1.0 }
    for i in range( n ):
        others = [ j for j in range( n ) if j != i ]
        outcomes = defaultdict( float )

        for p, k in zip( params.type_probs, params.type_selections ):
            w = p / math.comb( n - 1, k )
            for picks in combinations( others, k ):
                mask = 0
                for j in picks:
                    mask |= bit[ ( min( i, j ), max( i, j )) ]
                outcomes[ mask ] += w

        nxt = defaultdict( float )
        for mask, p in law.items():
            for omask, op in outcomes.items():
                nxt[ mask | omask ] += p * op
        law = nxt

    decoded = []
    for mask, p in law.items():
        edges = tuple( pair for pair in pairs if mask & bit[ pair ] )
        decoded.append(( edges, p ))

    log.debug( "edge law n=%d states=%d", n, len( decoded ))
    return tuple( decoded )

# ---------------------------------------------------------------------------
#   P[ predicate(view) ] where view is the graph induced on the survivors of
#       a uniformly chosen deletion set of size d. predicate gets a
#       GraphView with original ids.

def _weighted_views( params, d ):
    n = params.n
    if n > Const.Max_Exhaustive_Nodes:
        raise BudgetError( f"n <= {Const.Max_Exhaustive_Nodes}", f"exhaustive enumeration refuses n={n}" )
    _check_deletion( n, d )

    law = _edge_law( params )
    deletion_sets = list( combinations( range( n ), d ))
    weight = 1.0 / len( deletion_sets )

    for deleted in deletion_sets:
        gone = set( deleted )
        survivors = tuple( i for i in range( n ) if i not in gone )

        for edges, p in law:
            if gone:
                edges = tuple( e for e in edges if e[0] not in gone and e[1] not in gone )
            yield GraphView( nodes=survivors, edges=edges ), p * weight

def exhaustive_probability( params, d, predicate ):
    return math.fsum( w for view, w in _weighted_views( params, d ) if predicate( view ))

def exhaustive_event_probability( n, mu, k, d, predicate ):
    if n > Const.Max_Exhaustive_Nodes:
        raise BudgetError( f"n <= {Const.Max_Exhaustive_Nodes}", f"exhaustive enumeration refuses n={n}" )
    return exhaustive_probability( GraphParams.two_type( n, mu, k ), d, predicate )

# ---------------------------------------------------------------------------
#   Predicate: the r smallest surviving ids form a cut. Whatever was deleted,
#       that is one fixed r-set of survivors, so its probability is exactly
#       P[cut(r)] with d deleted.

def first_nodes_cut( r ):
    def predicate( view ):
        inside = set( view.nodes[:r] )
        return not any(( u in inside ) != ( v in inside ) for u, v in view.edge_pairs )
    return predicate

# ---------------------------------------------------------------------------
#   Exact product vs enumeration for every admissible r.

@dataclass( frozen=True )
class OracleRow:
    r: int
    exact: float
    enumerated: float

    @property
    def abs_diff( self ):
        return abs( self.exact - self.enumerated )

#   One pass over the enumeration serves every r.

def oracle_agreement( n, mu, k, d=0 ):
    params = GraphParams.two_type( n, mu, k )
    r_values = range( 1, n - d )
    predicates = [ first_nodes_cut( r ) for r in r_values ]
    hits = [ [] for _ in r_values ]

    for view, w in _weighted_views( params, d ):
        for i, predicate in enumerate( predicates ):
            if predicate( view ):
                hits[i].append( w )

    return [ OracleRow( r=r, exact=cut_probability( params, r, d=d ), enumerated=math.fsum( h ))
             for r, h in zip( r_values, hits ) ]

# ---------------------------------------------------------------------------
