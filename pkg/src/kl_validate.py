#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_validate.py - Self-checks of the whole library.

#   Each suite checks one invariant and returns a SuiteResult naming it.
#       'quick' runs the exact and small suites, 'full' adds the
#       Monte-Carlo gates, which take minutes.

#   Statistical gates compare an empirical frequency p^ against a bound b as
#       p^ <= b + 4 sigma, sigma = sqrt( b (1 - b) / trials ).
# ---------------------------------------------------------------------------

from __future__ import annotations

import math
import time
import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from kl_constants import Const
from kl_errors import ParameterError
from kl_graph_model import GraphParams, construct_two_type
from kl_component_analysis import connected_components, is_cut, has_cut_in_range, lemma1_check
from kl_oracle import oracle_agreement, union_bound_sum, cut_union_bound
from kl_bounds import (
    theorem1_bound, theorem2_bound, theorem2_min_x, alt_deleted_bound, corollary_r_bound,
    heuristic_giant_lower_bound, er_giant_fraction, mean_degree,
)
from kl_experiments import (
    ExperimentConfig, run_point, coupling_experiment, empirical_mean_degree, trial_rng,
)

log = logging.getLogger( __name__ )

# ---------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    invariant: str
    passed: bool
    detail: str = ''
    wall_time: float = 0.0

@dataclass
class ValidationReport:
    level: str
    seed: int
    suites: list = field( default_factory=list )

    @property
    def passed( self ):
        return all( s.passed for s in self.suites )

    @property
    def failures( self ):
        return [ s for s in self.suites if not s.passed ]

    def as_dict( self ):
        return {
            'level' :   self.level,
            'seed' :    self.seed,
            'passed' :  self.passed,
            'suites' :  [ vars( s ) for s in self.suites ],
        }

def _gate( p_hat, bound, trials ):
    b = min( 1.0, bound )
    return p_hat <= b + 4 * math.sqrt( b * ( 1 - b ) / trials )

# ===========================================================================
#   Quick suites
# ===========================================================================

def suite_oracle_exactness( seed, workers ):
    worst = 0.0
    where = None
    for n in ( 4, 5, 6 ):
        for k in ( 2, 3 ):
            for mu in ( 0.25, 0.5, 0.75 ):
                for d in ( 0, 1 ):
                    for row in oracle_agreement( n, mu, k, d ):
                        if row.abs_diff > worst:
                            worst, where = row.abs_diff, ( n, mu, k, d, row.r )

    ok = worst <= Const.Oracle_Tolerance
    detail = f"max abs diff {worst:.3g}" + ( f" at n,mu,K,d,r={where}" if not ok else '' )
    return ok, detail

# ---------------------------------------------------------------------------
#   Subset-sum over components against every subset of a small graph.

def suite_cut_search( seed, workers ):
    bad = 0
    checked = 0
    for t in range( 200 ):
        rng = trial_rng( seed, 1, t )
        n = int( rng.integers( 4, 9 ))
        params = GraphParams.two_type( n, 0.8, 2 )
        view = construct_two_type( params, rng ).view()
        nodes = [ int( x ) for x in view.nodes ]

        cut_sizes = set()
        for size in range( 1, n ):
            for S in combinations( nodes, size ):
                if is_cut( view, S ):
                    cut_sizes.add( size )

        report = connected_components( view )
        for lo in range( 1, n + 1 ):
            for hi in range( lo, n + 1 ):
                expect = any( lo <= s <= hi for s in cut_sizes )
                bad += has_cut_in_range( view, lo, hi, report=report ) != expect
                checked += 1

    return bad == 0, f"{bad} mismatches in {checked} ranges"

# ---------------------------------------------------------------------------

def suite_lemma1( seed, workers ):
    params = GraphParams.two_type( 30, 0.5, 2 )
    violations = 0
    for t in range( 10_000 ):
        view = construct_two_type( params, trial_rng( seed, 2, t )).view()
        report = connected_components( view )
        for x in range( 1, 11 ):
            violations += not lemma1_check( view, x, report=report ).holds

    return violations == 0, f"{violations} violations"

# ---------------------------------------------------------------------------

def suite_log_vs_direct( seed, workers ):
    worst = 0.0
    for n in ( 10, 30, 60 ):
        for k in ( 2, 3, 5 ):
            for mu in ( 0.1, 0.5, 0.9 ):
                for d in ( 0, 2 ):
                    params = GraphParams.two_type( n, mu, k )
                    a = cut_union_bound( params, 1, d=d, mode='log' ).terms
                    b = cut_union_bound( params, 1, d=d, mode='float64' ).terms
                    for x, y in zip( a, b ):
                        if y > 1e-300:
                            worst = max( worst, abs( x - y ) / y )

    return worst <= Const.Mode_Tolerance, f"max relative diff {worst:.3g}"

# ---------------------------------------------------------------------------

def suite_bound_identities( seed, workers ):
    problems = []

    for mu in ( 0.1, 0.5, 0.9 ):
        for k in ( 2, 3, 7 ):
            for m in ( 1, 5, 60 ):
                t1 = theorem1_bound( mu, k, m ).value
                r2 = corollary_r_bound(( mu, 1 - mu ), ( 1, k ), m ).value
                if not math.isclose( t1, r2, rel_tol=1e-12 ):
                    problems.append( f"r=2 reduction mu={mu} K={k} M={m}" )

                ratio = theorem1_bound( mu, k, m + 1 ).value / t1
                if not math.isclose( ratio, math.exp( -( 1 - mu ) * ( k - 1 )), rel_tol=1e-12 ):
                    problems.append( f"geometric ratio mu={mu} K={k} M={m}" )

            x = max( theorem2_min_x( mu, k, 5 ), math.floor( round( 2 * 5 / ( 1 - mu ), Const.Round_Digits )) + 1 )
            if alt_deleted_bound( mu, 5, x ).value > theorem2_bound( mu, k, 5, x ).value:
                problems.append( f"alt above theorem2 mu={mu} K={k}" )

    if theorem2_min_x( 0.9, 2, 20, 1.0 ) != 401:
        problems.append( "theorem2 threshold at mu=0.9 K=2 d=20" )

    if heuristic_giant_lower_bound( 1000, 0.9, 2, 20 ) != 780:
        problems.append( "heuristic bound at n=1000 d=20" )

    return not problems, '; '.join( problems )

# ---------------------------------------------------------------------------

def suite_er_residual( seed, workers ):
    worst = 0.0
    for c in ( 1.1, 2.2, 5.0 ):
        beta = er_giant_fraction( c )
        worst = max( worst, abs( beta + math.exp( -beta * c ) - 1 ))

    beta = er_giant_fraction( 2.2 )
    ok = worst < 1e-10 and abs( beta - 0.8437 ) <= 0.0005
    return ok, f"beta(2.2)={beta:.6f} max residual {worst:.3g}"

# ---------------------------------------------------------------------------

def _coupling( seed, workers, n, trials ):
    config = ExperimentConfig( n=n, trials=trials, seed=seed, workers=workers,
                               mu_vec=( 0.5, 0.3, 0.2 ), k_vec=( 1, 2, 4 ))
    report = coupling_experiment( config )
    return report.violations == 0, f"{report.edge_violations} edge and {report.cmax_violations} cmax violations in {trials} trials"

def suite_coupling_quick( seed, workers ):
    return _coupling( seed, workers, 100, 1000 )

# ===========================================================================
#   Full suites
# ===========================================================================

def suite_coupling_full( seed, workers ):
    return _coupling( seed, workers, 500, 10_000 )

def suite_outside_gate( seed, workers ):
    params = GraphParams.two_type( 1000, 0.9, 2 )
    s = run_point( params, 0, Const.Trials_CI, seed, point_index=0, workers=workers )
    return s.max_outside <= 90, f"max_outside {s.max_outside}, avg_cmax {s.avg_cmax:.2f}"

# ---------------------------------------------------------------------------

def suite_k_trend( seed, workers ):
    mins = []
    for i, k in enumerate( range( 2, 11 )):
        s = run_point( GraphParams.two_type( 5000, 0.9, k ), 0, 1000, seed, point_index=i, workers=workers )
        mins.append( s.min_cmax )

    drops = [ a - b for a, b in zip( mins, mins[1:] ) if b < a ]
    ok = len( drops ) <= 1 and all( x <= 2 for x in drops )
    return ok, f"min_cmax by K=2..10: {mins}"

# ---------------------------------------------------------------------------

def suite_deletion_heuristic( seed, workers ):
    below = []
    for i, mu in enumerate( np.round( np.arange( 0.1, 0.95, 0.1 ), 1 )):
        mu = float( mu )
        s = run_point( GraphParams.two_type( 1000, mu, 2 ), 20, Const.Trials_CI, seed, point_index=i, workers=workers )
        h = heuristic_giant_lower_bound( 1000, mu, 2, 20 )
        if s.min_cmax < h:
            below.append( f"mu={mu} min_cmax={s.min_cmax} < {h}" )
    return not below, '; '.join( below )

# ---------------------------------------------------------------------------

def suite_soundness( seed, workers ):
    n, mu, k = 30, 0.5, 2
    trials = 10 * Const.Trials_Full
    s = run_point( GraphParams.two_type( n, mu, k ), 0, trials, seed, point_index=0, workers=workers )

    problems = []
    for m in range( 2, 9 ):
        p_hat = s.fraction_outside_at_least( m )
        bound = union_bound_sum( n, mu, k, m ).raw_sum
        if not _gate( p_hat, bound, trials ):
            problems.append( f"M={m} empirical {p_hat:.3g} > bound {bound:.3g}" )
    return not problems, '; '.join( problems )

# ---------------------------------------------------------------------------

def suite_mean_degree( seed, workers ):
    params = GraphParams.two_type( 2000, 0.9, 2 )
    emp = empirical_mean_degree( params, 200, seed )
    formula = mean_degree( 2000, 0.9, 2 )
    return abs( emp - formula ) <= 0.02, f"empirical {emp:.4f} formula {formula:.4f}"

# ===========================================================================

Quick_Suites = [
    ( 'oracle_exactness',   "exact cut product equals enumeration",         suite_oracle_exactness ),
    ( 'cut_search',         "subset-sum cut search equals brute force",     suite_cut_search ),
    ( 'lemma1',             "no cut in [x, n-x] implies cmax > n-x",        suite_lemma1 ),
    ( 'log_vs_direct',      "log-domain and float64 sums agree",            suite_log_vs_direct ),
    ( 'bound_identities',   "bound reductions and geometric ratios",        suite_bound_identities ),
    ( 'er_residual',        "ER fixed point solves beta + e^-beta c = 1",   suite_er_residual ),
    ( 'coupling',           "coupled graph is an edge superset",            suite_coupling_quick ),
]

Full_Suites = [
    ( 'coupling_full',      "coupled graph is an edge superset",            suite_coupling_full ),
    ( 'outside_gate',       "max_outside <= 90 at n=1000 mu=0.9 K=2",       suite_outside_gate ),
    ( 'k_trend',            "min_cmax nondecreasing in K",                  suite_k_trend ),
    ( 'deletion_heuristic', "min_cmax above heuristic bound with d=20",     suite_deletion_heuristic ),
    ( 'soundness',          "empirical tail below finite-n union bound",    suite_soundness ),
    ( 'mean_degree',        "empirical mean degree matches formula",        suite_mean_degree ),
]

def suites_for( level ):
    if level not in Const.Validate_Levels:
        raise ParameterError( f"level in {Const.Validate_Levels}", f"unknown validation level '{level}'" )
    return Quick_Suites + ( Full_Suites if level == 'full' else [] )

# ---------------------------------------------------------------------------

def run_suite( name, invariant, fn, seed, workers ):
    start = time.perf_counter()
    passed, detail = fn( seed, workers )
    result = SuiteResult( name=name, invariant=invariant, passed=bool( passed ), detail=detail,
                          wall_time=time.perf_counter() - start )
    log.info( "suite done name=%s passed=%s wall=%.2fs", name, result.passed, result.wall_time )
    return result

def run_validation( level='quick', seed=1, workers=1, only=None ):
    suites = suites_for( level )
    unknown = sorted( set( only or () ) - { name for name, _, _ in suites } )
    if unknown:
        raise ParameterError( f"suite names at level {level}", f"unknown suites {unknown}" )

    report = ValidationReport( level=level, seed=seed )
    for name, invariant, fn in suites:
        if only and name not in only:
            continue
        report.suites.append( run_suite( name, invariant, fn, seed, workers ))
    return report

# ---------------------------------------------------------------------------
