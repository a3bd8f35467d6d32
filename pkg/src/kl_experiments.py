#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_experiments.py - Monte-Carlo sweeps of the largest component.

#   A sweep varies one of mu, K, d or n and at every point builds 'trials'
#       independent graphs, deletes d random nodes from each if asked, and
#       records |C_max|. Aggregates are average and minimum |C_max| and the
#       maximum number of nodes outside it.

#   Reproducibility: trial t of point p always draws from
#       trial_rng( seed, p, t ), whichever worker runs it. Workers return
#       integer sums, minima and histograms which are merged exactly, so the
#       CSV is byte-identical for any worker count.
# ---------------------------------------------------------------------------

from __future__ import annotations

import os
import sys
import csv
import io
import json
import math
import time
import logging
import multiprocessing
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from tqdm import tqdm

import kl_version
from kl_constants import Const
from kl_errors import ParameterError
from kl_graph_model import GraphParams, construct_r_type, construct_two_type, delete_random_nodes, draw_deleted, couple_extend
from kl_component_analysis import connected_components, cmax_from_selections
from kl_oracle import cut_union_bound
from kl_bounds import heuristic_giant_lower_bound, smallest_m_below, theorem1_bound, theorem2_min_x, smallest_x_below

log = logging.getLogger( __name__ )

# ---------------------------------------------------------------------------

def check_seed( seed ):
    if int( seed ) != seed or seed < 0:
        raise ParameterError( "seed >= 0", f"seed must be a non-negative integer, got {seed}" )

def trial_rng( seed, point, trial ):
    check_seed( seed )
    ss = np.random.SeedSequence( seed, spawn_key=( point, trial ))
    return np.random.Generator( np.random.PCG64( ss ))

# ---------------------------------------------------------------------------
#   Pool size: the requested count, capped by the cpu count and by
#       $KOUTLAB_THREADS when set.

def resolve_workers( requested=None ):
    cap = Const.CPU_Count

    env = os.environ.get( Const.Threads_Env )
    if env:
        try:
            limit = int( env )
        except ValueError:
            limit = 0
        if limit < 1:
            raise ParameterError( f"{Const.Threads_Env} >= 1", f"{Const.Threads_Env}='{env}' is not a positive integer" )
        cap = min( cap, limit )

    if requested is None:
        return cap

    if int( requested ) != requested or requested < 1:
        raise ParameterError( "workers >= 1", f"worker count must be a positive integer, got {requested}" )
    return min( int( requested ), cap )

# ---------------------------------------------------------------------------

def _chunks( trials, workers ):
    size = max( 1, math.ceil( trials / ( workers * 4 )))
    return [ ( lo, min( trials, lo + size )) for lo in range( 0, trials, size ) ]

#   Run fn over task tuples, sequentially or in a Pool. Results come back in
#       arbitrary order; callers merge them with commutative operations.

def _map_tasks( fn, tasks, workers ):
    if workers <= 1 or len( tasks ) <= 1:
        return [ fn( task ) for task in tasks ]

    with multiprocessing.Pool( min( workers, len( tasks ))) as pool:
        return list( pool.imap_unordered( fn, tasks ))

# ===========================================================================
#   One sweep point
# ===========================================================================

@dataclass
class TrialSummary:
    sweep_param: str
    value: float
    n: int
    mu: float
    k: int
    d: int
    trials: int
    avg_cmax: float
    min_cmax: int
    max_outside: int
    n_effective: int
    seed: int
    wall_time: float = 0.0
    ensemble: dict = field( default_factory=dict )
    outside_histogram: tuple = field( default=(), repr=False )
    overlays: dict = field( default_factory=dict )
    flags: list = field( default_factory=list )

    # -----------------------------------------------------------------------
    #   Fraction of trials with at least m nodes outside C_max, that is the
    #       estimate of P[ |C_max| <= n_effective - m ].

    def fraction_outside_at_least( self, m ):
        hist = self.outside_histogram
        if m >= len( hist ):
            return 0.0
        return sum( hist[ max( m, 0 ): ] ) / self.trials

    def csv_row( self ):
        return [
            self.sweep_param,
            f"{self.value:.10g}",
            self.n,
            f"{self.mu:.10g}",
            self.k,
            self.d,
            self.trials,
            f"{self.avg_cmax:.6f}",
            self.min_cmax,
            self.max_outside,
            self.seed,
        ]

    def as_dict( self ):
        return {
            'sweep_param' :     self.sweep_param,
            'value' :           self.value,
            'n' :               self.n,
            'mu' :              self.mu,
            'K' :               self.k,
            'd' :               self.d,
            'trials' :          self.trials,
            'avg_cmax' :        self.avg_cmax,
            'min_cmax' :        self.min_cmax,
            'max_outside' :     self.max_outside,
            'n_effective' :     self.n_effective,
            'seed' :            self.seed,
            'wall_time' :       self.wall_time,
            'ensemble' :        self.ensemble,
            'overlays' :        self.overlays,
            'flags' :           self.flags,
        }

# ---------------------------------------------------------------------------
#   Worker, module level so the Pool can pickle it.

def _point_chunk( task ):
    params, d, seed, point, lo, hi = task
    n_eff = params.n - d

    small = params.n <= Const.Small_Graph_Nodes

    total = 0
    hist = np.zeros( n_eff + 1, dtype=np.int64 )

    for t in range( lo, hi ):
        rng = trial_rng( seed, point, t )
        g = construct_r_type( params, rng )

        if small:
            alive = draw_deleted( params.n, d, rng )[1] if d else None
            cmax = cmax_from_selections( params.n, g.sel_src, g.sel_dst, alive )
        else:
            view = delete_random_nodes( g, d, rng )[1] if d else g.view()
            cmax = connected_components( view ).cmax

        total += cmax
        hist[ n_eff - cmax ] += 1

    return total, hist

# ---------------------------------------------------------------------------

def run_point( params, d, trials, seed, point_index=0, workers=1 ):
    check_seed( seed )
    if int( trials ) != trials or trials < 1:
        raise ParameterError( "trials >= 1", f"trial count must be a positive integer, got {trials}" )
    if int( d ) != d or not ( 0 <= d < params.n ):
        raise ParameterError( "0 <= d < n", f"cannot delete {d} of {params.n} nodes" )
    trials, d = int( trials ), int( d )

    start = time.perf_counter()
    tasks = [ ( params, d, seed, point_index, lo, hi ) for lo, hi in _chunks( trials, workers ) ]

    total = 0
    hist = np.zeros( params.n - d + 1, dtype=np.int64 )
    for chunk_total, chunk_hist in _map_tasks( _point_chunk, tasks, workers ):
        total += chunk_total
        hist += chunk_hist

    n_eff = params.n - d
    max_outside = int( np.flatnonzero( hist )[-1] )

    return TrialSummary(
        sweep_param =       '',
        value =             float( 'nan' ),
        n =                 params.n,
        mu =                params.mu,
        k =                 params.k,
        d =                 d,
        trials =            trials,
        avg_cmax =          total / trials,
        min_cmax =          n_eff - max_outside,
        max_outside =       max_outside,
        n_effective =       n_eff,
        seed =              seed,
        wall_time =         time.perf_counter() - start,
        ensemble =          params.as_dict(),
        outside_histogram = tuple( int( x ) for x in hist ),
    )

# ===========================================================================
#   Sweeps
# ===========================================================================

@dataclass
class ExperimentConfig:
    sweep_param: str = 'mu'
    values: tuple = ()
    n: int = Const.Default_N
    mu: float = Const.Default_Mu
    k: int = Const.Default_K
    d: int = 0
    trials: int = Const.Trials_CI
    seed: int = 0
    out: str | None = None
    overlays: tuple = ()
    eps: float = Const.Default_Eps
    workers: int | None = None
    mu_vec: tuple | None = None
    k_vec: tuple | None = None

    @property
    def r_type( self ):
        return self.mu_vec is not None or self.k_vec is not None

    # -----------------------------------------------------------------------
    #   (GraphParams, d) at one sweep value.

    def point( self, value ):
        fixed = { 'n' : self.n, 'mu' : self.mu, 'k' : self.k, 'd' : self.d }

        if self.sweep_param == 'mu':
            fixed['mu'] = float( value )
        else:
            if int( value ) != value:
                raise ParameterError( f"integer {self.sweep_param}", f"{self.sweep_param} sweep value {value} is not an integer" )
            fixed[ self.sweep_param ] = int( value )

        if self.r_type:
            params = GraphParams( fixed['n'], self.mu_vec, self.k_vec )
        else:
            params = GraphParams.two_type( fixed['n'], fixed['mu'], fixed['k'] )

        d = fixed['d']
        if int( d ) != d or not ( 0 <= d < params.n ):
            raise ParameterError( "0 <= d < n", f"cannot delete {d} of {params.n} nodes" )
        return params, int( d )

    # -----------------------------------------------------------------------

    def validate( self ):
        if self.sweep_param not in Const.Sweep_Params:
            raise ParameterError( f"sweep axis in {Const.Sweep_Params}", f"unknown sweep axis '{self.sweep_param}'" )

        if not self.values:
            raise ParameterError( "non-empty sweep", "no sweep values given" )

        if int( self.trials ) != self.trials or self.trials < 1:
            raise ParameterError( "trials >= 1", f"trial count must be a positive integer, got {self.trials}" )

        check_seed( self.seed )

        if self.r_type and self.sweep_param in ( 'mu', 'k' ):
            raise ParameterError( "sweep axis d or n", f"cannot sweep '{self.sweep_param}' over explicit type vectors" )

        unknown = [ x for x in self.overlays if x not in Const.Overlays ]
        if unknown:
            raise ParameterError( f"overlays in {Const.Overlays}", f"unknown overlays {unknown}" )

        for value in self.values:
            self.point( value )

    def as_dict( self ):
        return {
            'sweep_param' : self.sweep_param,
            'values' :      list( self.values ),
            'n' :           self.n,
            'mu' :          self.mu,
            'K' :           self.k,
            'd' :           self.d,
            'trials' :      self.trials,
            'seed' :        self.seed,
            'overlays' :    list( self.overlays ),
            'eps' :         self.eps,
            'mu_vec' :      list( self.mu_vec ) if self.mu_vec is not None else None,
            'k_vec' :       list( self.k_vec ) if self.k_vec is not None else None,
        }

# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    config: ExperimentConfig
    summaries: list
    resolved: dict = field( default_factory=dict )

    def to_rows( self ):
        return [ Const.CSV_Header ] + [ s.csv_row() for s in self.summaries ]

    def to_csv( self ):
        buf = io.StringIO()
        writer = csv.writer( buf, lineterminator='\n' )
        writer.writerows( self.to_rows() )
        return buf.getvalue()

    def to_json( self ):
        return {
            'program' :     Const.Program_Name,
            'version' :     kl_version.__version__,
            'seed' :        self.config.seed,
            'config' :      self.resolved or self.config.as_dict(),
            'points' :      [ s.as_dict() for s in self.summaries ],
        }

    def write( self, out ):
        out = Path( out )
        out.write_text( self.to_csv() )
        out.with_suffix( '.json' ).write_text( json.dumps( self.to_json(), indent=2 ) + '\n' )
        return out, out.with_suffix( '.json' )

# ---------------------------------------------------------------------------

def check_writable( out ):
    out = Path( out )
    if out.is_dir():
        raise ParameterError( "writable output path", f"output path '{out}' is a directory" )

    parent = out.parent if str( out.parent ) else Path( '.' )
    if not parent.is_dir():
        raise ParameterError( "writable output path", f"output directory '{parent}' does not exist" )

    for target in ( out, out.with_suffix( '.json' )):
        if target.exists() and not os.access( target, os.W_OK ):
            raise ParameterError( "writable output path", f"cannot write '{target}'" )

    if not os.access( parent, os.W_OK ):
        raise ParameterError( "writable output path", f"cannot write in directory '{parent}'" )

# ---------------------------------------------------------------------------
#   Bound curves attached to a two-type point.

def compute_overlays( summary, params, config ):
    overlays = {}
    if not params.is_two_type:
        return overlays

    mu, k, d, n = params.mu, params.k, summary.d, params.n

    if 'heuristic' in config.overlays:
        overlays['heuristic'] = { 'lower_bound' : heuristic_giant_lower_bound( n, mu, k, d ), 'heuristic' : True }

    if 'theorem1' in config.overlays and d == 0:
        overlays['theorem1'] = {
            'm_at_one_over_trials' :    smallest_m_below( mu, k, 1.0 / summary.trials ),
            'bound_at_max_outside' :    theorem1_bound( mu, k, max( 1, summary.max_outside )).value,
        }

    if 'theorem2' in config.overlays:
        overlays['theorem2'] = {
            'eps' :                     config.eps,
            'x_min' :                   theorem2_min_x( mu, k, d, config.eps ),
            'x_at_one_over_trials' :    smallest_x_below( mu, k, d, 1.0 / summary.trials, config.eps ),
        }

    return overlays

# ---------------------------------------------------------------------------
#   With d = 0, the finite-n union bound says |C_max| <= n - M has
#       probability below 10 / trials once M reaches M*. Seeing a smaller
#       min_cmax is possible but suspicious, so it is flagged, not raised.

def plausibility_limit( params, trials ):
    hi = params.n // 2
    if hi < 1:
        return None

    terms = np.array( cut_union_bound( params, 1 ).terms )
    tails = np.cumsum( terms[::-1] )[::-1]              # tails[M-1] = sum over r >= M
    below = np.flatnonzero( tails < 10.0 / trials )
    if len( below ) == 0:
        return None
    return int( below[0] ) + 1

def plausibility_flags( summary, params ):
    if summary.d != 0:
        return []

    m_star = plausibility_limit( params, summary.trials )
    if m_star is not None and summary.min_cmax < params.n - m_star:
        log.warning( "implausible min_cmax value=%s min_cmax=%d limit=%d", summary.value, summary.min_cmax, params.n - m_star )
        return [ f"min_cmax {summary.min_cmax} below n - M* = {params.n - m_star}" ]
    return []

# ---------------------------------------------------------------------------

def run_sweep( config, resolved=None ):
    config.validate()
    if config.out:
        check_writable( config.out )

    workers = resolve_workers( config.workers )
    log.info( "sweep start axis=%s points=%d trials=%d seed=%d workers=%d",
              config.sweep_param, len( config.values ), config.trials, config.seed, workers )

    summaries = []
    for point, value in enumerate( tqdm( config.values, desc=f"sweep {config.sweep_param}", file=sys.stderr, disable=None )):
        params, d = config.point( value )
        summary = run_point( params, d, config.trials, config.seed, point_index=point, workers=workers )
        summary = replace( summary, sweep_param=config.sweep_param, value=float( value ))
        summary.overlays = compute_overlays( summary, params, config )
        summary.flags = plausibility_flags( summary, params )

        log.info( "point done axis=%s value=%g avg_cmax=%.3f min_cmax=%d max_outside=%d wall=%.2fs",
                  config.sweep_param, value, summary.avg_cmax, summary.min_cmax, summary.max_outside, summary.wall_time )
        summaries.append( summary )

    result = SweepResult( config=config, summaries=summaries, resolved=resolved or {} )
    if config.out:
        result.write( config.out )
    return result

# ===========================================================================
#   Coupling: a two-type graph extended to an r-type one only gains edges,
#       so |C_max| cannot shrink.
# ===========================================================================

@dataclass
class CouplingReport:
    trials: int
    n: int
    edge_violations: int
    cmax_violations: int
    avg_cmax_base: float
    avg_cmax_extended: float
    seed: int
    wall_time: float = 0.0

    @property
    def violations( self ):
        return self.edge_violations + self.cmax_violations

    def as_dict( self ):
        return {
            'trials' :              self.trials,
            'n' :                   self.n,
            'edge_violations' :     self.edge_violations,
            'cmax_violations' :     self.cmax_violations,
            'avg_cmax_base' :       self.avg_cmax_base,
            'avg_cmax_extended' :   self.avg_cmax_extended,
            'seed' :                self.seed,
            'wall_time' :           self.wall_time,
        }

def base_params_for( target ):
    mu_tilde = math.fsum( target.type_probs[:-1] )
    return GraphParams.two_type( target.n, mu_tilde, target.k )

def _coupling_chunk( task ):
    base, target, seed, lo, hi = task
    edge_bad = cmax_bad = sum_base = sum_ext = 0

    for t in range( lo, hi ):
        rng = trial_rng( seed, 0, t )
        g2 = construct_two_type( base, rng )
        g = couple_extend( g2, target, rng )

        if not np.isin( g2.edge_codes, g.edge_codes ).all():
            edge_bad += 1

        c2 = connected_components( g2.view() ).cmax
        c = connected_components( g.view() ).cmax
        cmax_bad += c < c2
        sum_base += c2
        sum_ext += c

    return edge_bad, cmax_bad, sum_base, sum_ext

def coupling_experiment( config ):
    if not config.r_type:
        raise ParameterError( "mu_vec and k_vec", "coupling needs an r-type target" )
    if int( config.trials ) != config.trials or config.trials < 1:
        raise ParameterError( "trials >= 1", f"trial count must be a positive integer, got {config.trials}" )

    target = GraphParams( config.n, config.mu_vec, config.k_vec )
    base = base_params_for( target )
    workers = resolve_workers( config.workers )

    start = time.perf_counter()
    tasks = [ ( base, target, config.seed, lo, hi ) for lo, hi in _chunks( config.trials, workers ) ]
    totals = np.zeros( 4, dtype=np.int64 )
    for res in _map_tasks( _coupling_chunk, tasks, workers ):
        totals += np.array( res, dtype=np.int64 )

    report = CouplingReport(
        trials =            config.trials,
        n =                 target.n,
        edge_violations =   int( totals[0] ),
        cmax_violations =   int( totals[1] ),
        avg_cmax_base =     totals[2] / config.trials,
        avg_cmax_extended = totals[3] / config.trials,
        seed =              config.seed,
        wall_time =         time.perf_counter() - start,
    )
    log.info( "coupling done trials=%d violations=%d", report.trials, report.violations )
    return report

# ---------------------------------------------------------------------------
#   Average over trials of 2|E| / n.

def empirical_mean_degree( params, trials, seed ):
    total = 0.0
    for t in range( trials ):
        g = construct_r_type( params, trial_rng( seed, 0, t ))
        total += 2.0 * len( g.edges ) / params.n
    return total / trials

# ---------------------------------------------------------------------------
