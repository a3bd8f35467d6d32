#!/usr/bin/env python
# --------------------------------------------------------------------------
#   kl_constants.py
#   Constants to avoid hardwired values elsewhere in code.

#   Everything lives in class Const so callers import one name. Values here
#       are defaults only; kl_config.py lets the config file and flags
#       override the ones marked as settings.
# --------------------------------------------------------------------------

import os

import kl_version

# --------------------------------------------------------------------------

class Const( ):

    # ----------------------------------------------------------------------------

    Program_Name =      "koutlab"
    Long_Title =        "Koutlab - Giant Components of Inhomogeneous Random K-out Graphs"
    Version =          f"{kl_version.__version__} build {kl_version.__build__}"

    Config_File =       'koutlab.conf'
    Config_Proto =      'koutlab.conf.proto'
    Threads_Env =       'KOUTLAB_THREADS'
    CPU_Count =         os.cpu_count() or 1

    # --------------------------------------
    #   Exit codes besides 0, see kl_cli.py

    Exit_Param =        2
    Exit_Validation =   3

    # --------------------------------------
    #   Numerical tolerances.

    Sum_Tolerance =     1e-12           # |sum(mu) - 1|
    Oracle_Tolerance =  1e-12           # exact product vs enumeration
    Mode_Tolerance =    1e-9            # log-domain vs float64, relative
    ER_Tolerance =      1e-12           # brentq relative tolerance for er_giant_fraction
    ER_Lower =          1e-300          # lower bracket for er_giant_fraction
    Round_Digits =      9               # guard when comparing against hypotheses like x > 400

    Max_Exhaustive_Nodes = 7            # 2^n types x prod(selections) x C(n,d) grows fast
    Small_Graph_Nodes = 64              # run_point uses union-find on the selections up to this n

    # --------------------------------------
    #   Experiment defaults. Trials_CI keeps tests and quick runs short,
    #       Trials_Full is for full-scale reproduction runs.

    Trials_CI =         10_000
    Trials_Full =       100_000
    Default_Eps =       1.0
    Default_N =         1000
    Default_Mu =        0.9
    Default_K =         2

    Sweep_Params =      ( 'mu', 'k', 'd', 'n' )
    Overlays =          ( 'theorem1', 'theorem2', 'heuristic' )
    Formats =           ( 'csv', 'json' )

    CSV_Header =        [ 'sweep_param', 'value', 'n', 'mu', 'K', 'd', 'trials',
                          'avg_cmax', 'min_cmax', 'max_outside', 'seed' ]

    Validate_Levels =   ( 'quick', 'full' )

    Log_Format =        '%(asctime)s %(levelname)s %(name)s: %(message)s'

# --------------------------------------------------------------------------
