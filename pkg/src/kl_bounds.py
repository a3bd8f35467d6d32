#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_bounds.py - Closed-form asymptotic bounds on the giant component.

#   Every bound here is a geometric tail e^{-x a} / (1 - e^{-a}), or a sum of
#       two, with the o(1) corrections of the asymptotic statements dropped.
#       The dropped terms are listed in AsymptoticBound.regime_notes. These
#       values are approximations at finite n and are not clamped to 1; the
#       rigorous finite-n companions are in kl_oracle.py.

#   Two-type ensemble: w.p. mu a node picks 1 other node, else K of them.
#       <K> = mu + (1-mu) K and <K> - 1 = (1-mu)(K-1), the latter is used
#       directly to keep e.g. 1.1 - 1 from becoming 0.10000000000000009.
# ---------------------------------------------------------------------------

from __future__ import annotations

import math
import logging
from dataclasses import dataclass, field

from scipy.optimize import brentq

from kl_constants import Const
from kl_errors import ParameterError
from kl_graph_model import validate_type_vectors

log = logging.getLogger( __name__ )

Heuristic_Note = "heuristic: not a proven bound"

Notes_Asymptotic = (
    "dropped (1 - o(1)) factor in the exponent",
    "dropped additive o(1)",
)

Notes_Deleted = Notes_Asymptotic + (
    "d = O(1): giant component has n - O(1) nodes",
    "d = omega(1) and o(n): giant component has n(1 - o(1)) nodes",
)

# ---------------------------------------------------------------------------

@dataclass( frozen=True )
class AsymptoticBound:
    value: float
    kind: str
    inputs: dict = field( default_factory=dict )
    regime_notes: tuple = ()

    def as_dict( self ):
        return { 'kind' : self.kind, 'value' : self.value, 'inputs' : dict( self.inputs ), 'regime_notes' : list( self.regime_notes ) }

# ---------------------------------------------------------------------------

def _check_two_type( mu, k ):
    if not ( 0.0 < mu < 1.0 ):
        raise ParameterError( "0 < mu < 1", f"mu must lie strictly between 0 and 1, got {mu}" )
    if int( k ) != k or k < 2:
        raise ParameterError( "K >= 2", f"type-2 selection count must be an integer >= 2, got {k}" )

def _check_eps( eps ):
    if not ( eps > 0 ):
        raise ParameterError( "eps > 0", f"eps must be positive, got {eps}" )

def _check_at_least_one( name, value ):
    if int( value ) != value or value < 1:
        raise ParameterError( f"{name} >= 1", f"{name} must be an integer >= 1, got {value}" )

def _check_d( d ):
    if int( d ) != d or d < 0:
        raise ParameterError( "d >= 0", f"deleted node count must be a non-negative integer, got {d}" )

# ---------------------------------------------------------------------------
#   sum_{j >= x} e^{-j rate}

def _tail( x, rate ):
    return math.exp( -x * rate ) / -math.expm1( -rate )

#   Smallest integer strictly above 'threshold', with the threshold rounded so
#       that 2 * 20 / 0.1 is 400 and not 400.00000000000006.

def _first_above( threshold ):
    return math.floor( round( threshold, Const.Round_Digits )) + 1

# ---------------------------------------------------------------------------

def avg_selections( mu, k ):
    _check_two_type( mu, k )
    return mu + ( 1.0 - mu ) * k

def selection_gap( mu, k ):
    """ <K> - 1 """
    _check_two_type( mu, k )
    return ( 1.0 - mu ) * ( k - 1 )

# ---------------------------------------------------------------------------

def theorem1_bound( mu, k, m ):
    _check_at_least_one( 'M', m )
    gap = selection_gap( mu, k )

    return AsymptoticBound(
        value =         _tail( m, gap ),
        kind =          'theorem1',
        inputs =        { 'mu' : mu, 'K' : k, 'M' : m },
        regime_notes =  Notes_Asymptotic,
    )

# ---------------------------------------------------------------------------
#   Least x with x > (1 + eps) d / (<K> - 1).

def theorem2_min_x( mu, k, d, eps=Const.Default_Eps ):
    _check_d( d )
    _check_eps( eps )
    if d == 0:
        return 1
    return _first_above(( 1 + eps ) * d / selection_gap( mu, k ))

def theorem2_bound( mu, k, d, x, eps=Const.Default_Eps ):
    _check_at_least_one( 'x', x )
    x_min = theorem2_min_x( mu, k, d, eps )
    gap = selection_gap( mu, k )

    if x < x_min:
        threshold = round(( 1 + eps ) * d / gap, Const.Round_Digits )
        raise ParameterError( "x > (1+eps) d / (<K>-1)", f"x must exceed {threshold:g}, got x={x}" )

    shrink = eps / ( 1 + eps )
    value = _tail( x, gap * shrink ) + _tail( x, ( 1 - mu ) * shrink )

    return AsymptoticBound(
        value =         value,
        kind =          'theorem2',
        inputs =        { 'mu' : mu, 'K' : k, 'd' : d, 'x' : x, 'eps' : eps },
        regime_notes =  Notes_Deleted,
    )

# ---------------------------------------------------------------------------
#   Single-tail variant under the stronger hypothesis x > (1 + eps) d / (1 - mu).

def alt_deleted_bound( mu, d, x, eps=Const.Default_Eps ):
    if not ( 0.0 < mu < 1.0 ):
        raise ParameterError( "0 < mu < 1", f"mu must lie strictly between 0 and 1, got {mu}" )
    _check_d( d )
    _check_eps( eps )
    _check_at_least_one( 'x', x )

    if d > 0 and x < _first_above(( 1 + eps ) * d / ( 1 - mu )):
        threshold = round(( 1 + eps ) * d / ( 1 - mu ), Const.Round_Digits )
        raise ParameterError( "x > (1+eps) d / (1-mu)", f"x must exceed {threshold:g}, got x={x}" )

    return AsymptoticBound(
        value =         _tail( x, ( 1 - mu ) * eps / ( 1 + eps )),
        kind =          'alt',
        inputs =        { 'mu' : mu, 'd' : d, 'x' : x, 'eps' : eps },
        regime_notes =  Notes_Asymptotic,
    )

# ===========================================================================
#   r node types. Only the largest type matters in the exponent:
#       rate (K_r - 1) mu_r.
# ===========================================================================

def _r_rate( mu_vec, k_vec ):
    probs, ks = validate_type_vectors( mu_vec, k_vec )
    if ks[-1] < 2:
        raise ParameterError( "K_r >= 2", f"largest selection count is {ks[-1]}" )
    return probs, ks, ( ks[-1] - 1 ) * probs[-1]

def corollary_r_bound( mu_vec, k_vec, m ):
    _check_at_least_one( 'M', m )
    probs, ks, rate = _r_rate( mu_vec, k_vec )

    return AsymptoticBound(
        value =         _tail( m, rate ),
        kind =          'r',
        inputs =        { 'mu' : list( probs ), 'K' : list( ks ), 'M' : m },
        regime_notes =  Notes_Asymptotic,
    )

def corollary_r_deleted_bound( mu_vec, k_vec, d, x, eps=Const.Default_Eps ):
    _check_d( d )
    _check_eps( eps )
    _check_at_least_one( 'x', x )
    probs, ks, rate = _r_rate( mu_vec, k_vec )

    if d > 0 and x < _first_above(( 1 + eps ) * d / rate ):
        threshold = round(( 1 + eps ) * d / rate, Const.Round_Digits )
        raise ParameterError( "x > (1+eps) d / ((K_r-1) mu_r)", f"x must exceed {threshold:g}, got x={x}" )

    shrink = eps / ( 1 + eps )
    value = _tail( x, rate * shrink ) + _tail( x, probs[-1] * shrink )

    return AsymptoticBound(
        value =         value,
        kind =          'rdel',
        inputs =        { 'mu' : list( probs ), 'K' : list( ks ), 'd' : d, 'x' : x, 'eps' : eps },
        regime_notes =  Notes_Deleted,
    )

# ---------------------------------------------------------------------------
#   Each deleted node can take about 1/(<K>-1) others with it, so
#       n - d - d / (<K> - 1) nodes should remain in the giant component.

def heuristic_giant_lower_bound( n, mu, k, d ):
    _check_d( d )
    raw = n - d - d / selection_gap( mu, k )
    return max( 0, math.ceil( round( raw, Const.Round_Digits )))

# ---------------------------------------------------------------------------
#   Giant component fraction beta of an Erdos-Renyi graph with mean degree c:
#       the root in (0, 1] of beta + e^{-beta c} = 1.

#   Solved as g(beta) = (beta + e^{-beta c} - 1) / beta, which tends to
#       1 - c < 0 as beta -> 0, so the bracket holds for any c > 1 even
#       when the root is near 2(c - 1).

def er_giant_fraction( c ):
    if not ( math.isfinite( c ) and c > 1 ):
        raise ParameterError( "c > 1", f"no giant component for mean degree c={c}" )

    def f( beta ):
        return beta + math.expm1( -beta * c )

    def g( beta ):
        return 1.0 + math.expm1( -beta * c ) / beta

    if g( Const.ER_Lower ) >= 0.0:
        return 2.0 * ( c - 1.0 ) / c            # c within rounding of 1

    beta = brentq( g, Const.ER_Lower, 1.0, xtol=Const.ER_Tolerance * Const.ER_Lower, rtol=Const.ER_Tolerance )
    log.debug( "er_giant_fraction c=%g beta=%.12f residual=%.3g", c, beta, f( beta ))
    return beta

# ---------------------------------------------------------------------------
#   P[i ~ j] = 2 p - p^2 with p = <K> / (n - 1) the chance that a given node
#       picks a given other, so the mean degree is (n - 1)(2p - p^2).

def _mean_degree( n, avg, k_max ):
    if k_max >= n:
        raise ParameterError( "K < n", f"selection count {k_max} must be below n={n}" )
    return 2 * avg - avg * avg / ( n - 1 )

def mean_degree( n, mu, k ):
    return _mean_degree( n, avg_selections( mu, k ), k )

def mean_degree_params( params ):
    return _mean_degree( params.n, params.avg_selections, params.k )

# ===========================================================================
#   Inverting the tails: least M (or x) at which a bound drops below 'level'.
# ===========================================================================

def _least_below( fn, start, level ):
    if not ( 0 < level ):
        raise ParameterError( "level > 0", f"target level must be positive, got {level}" )

    if fn( start ) < level:
        return start

    hi = start + 1
    while fn( hi ) >= level:
        hi = start + 2 * ( hi - start )

    lo = start                                  # fn(lo) >= level > fn(hi)
    while hi - lo > 1:
        mid = ( lo + hi ) // 2
        if fn( mid ) < level:
            hi = mid
        else:
            lo = mid
    return hi

def smallest_m_below( mu, k, level ):
    _check_two_type( mu, k )
    return _least_below( lambda m: theorem1_bound( mu, k, m ).value, 1, level )

def smallest_x_below( mu, k, d, level, eps=Const.Default_Eps ):
    start = theorem2_min_x( mu, k, d, eps )
    return _least_below( lambda x: theorem2_bound( mu, k, d, x, eps ).value, start, level )

# ---------------------------------------------------------------------------
