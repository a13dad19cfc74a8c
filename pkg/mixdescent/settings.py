# Default settings
# 1) listed here
# 2) importing them in a project: from mixdescent.settings import *  # NOQA
# 3) updating them if needed: MIXDESCENT.update({}), TOY.update({}), ...
#
# Experiment configs are nested dicts addressed with dotted keys, ie. `transform.eta0 = 0.5`
# in a config file or `--override schedule.inner_steps=5` on the command line.

MIXDESCENT = {
    # replicates executed in parallel processes; output does not depend on it
    'WORKERS': 1,
    # fill `wall_ms` columns with measured time; breaks byte-identical reruns
    'RECORD_WALL_TIME': False,
    # tolerance on |sum(weights) - 1|
    'SIMPLEX_TOLERANCE': 1e-12,
    # |alpha| (resp. |alpha - 1|) below this dispatches to the limit formulas
    'ALPHA_LIMIT_BAND': 1e-12,
    # number of grid points used to evaluate infima in monotonicity constants
    'CONSTANTS_GRID_SIZE': 10_000,
    # relative padding of the observed gradient range approximating the transform domain
    'DOMAIN_PADDING': 0.1,
    'FLOAT_FORMAT': '%.17g',
    'CODE_VERSION': 'mixdescent-0.1.0',
}

# Defaults shared by every experiment
EXPERIMENT = {
    'experiment': None,
    'method': 'power',
    'alpha': 0.5,
    'transform': {
        'family': 'power',
        'eta0': 0.5,
        'kappa': 0.0,
        'rate_policy': 'inverse_sqrt_n',
        # finite bound on |b| for the exponential alpha != 1 convergence check, None if unknown
        'b_infty': None,
    },
    'schedule': {
        'outer_steps': 20,
        'particles': 100,
        'samples': 100,
        # particles/samples added after every outer step
        'growth': 0,
        'inner_steps': 10,
        'bandwidth_scale': 1.0,
        # samples behind the recorded bounds of every outer step, the phase's sample count when None
        'evaluation_samples': None,
    },
    # keep optimized weights through exploration instead of resetting to uniform
    'carry_weights': False,
    # skip updates whose gradient estimate has non-finite entries instead of aborting
    'skip_flagged': False,
    # report admissibility violations as warnings and continue
    'warn_only': False,
    'dims': [],
    'replicates': 1,
    'master_seed': 0,
    'dataset_path': None,
    'minibatch': 100,
    'output_dir': 'out',
    'export_format': 'csv',
}

# Toy gaussian mixture experiment
TOY = {
    'experiment': 'toy',
    'method': 'power,mirror,mirror:1',
    'alpha': 0.5,
    'dims': [8],
    'replicates': 10,
    'target': {
        'separation': 2.0,
        'scale': 2.0,
    },
    # initial sampler N(0, initial_variance * I_d)
    'initial_variance': 5.0,
}

# Bayesian logistic regression experiment
BLR = {
    'experiment': 'blr',
    'method': 'power,ais',
    'alpha': 0.5,
    'transform': {
        'family': 'power',
        'eta0': 0.05,
        'kappa': 0.0,
        'rate_policy': 'constant',
        'b_infty': None,
    },
    'schedule': {
        'outer_steps': 500,
        'particles': 20,
        'samples': 20,
        'growth': 1,
        'inner_steps': 1,
        'bandwidth_scale': 0.1,
    },
    'replicates': 5,
    'minibatch': 100,
    'prior': {
        'shape': 1.0,
        'rate': 0.01,
    },
    # covtype.binary encodes classes as 1 and 2
    'label_map': {'1': -1, '2': 1},
    'standardize': True,
    # constant feature appended after standardization
    'intercept': True,
    'test_fraction': 0.2,
    'subsample': 5000,
    'subsample_seed': 20200101,
    'full': False,
    'predictive_samples': 200,
}

# Exact-oracle property suite
ORACLE = {
    'experiment': 'oracle',
    'instances': 50,
    'steps': 50,
    'tv_seeds': 50,
    # extra transform configs checked by the admissibility family, ie. [{"family": "power", "alpha": 0.5, "eta0": 1, "kappa": 0.1}]
    'inject': [],
}

EXPERIMENT_DEFAULTS = {
    'toy': TOY,
    'blr': BLR,
    'oracle': ORACLE,
}
