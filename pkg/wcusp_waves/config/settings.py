"""
Settings and constants used by wcusp-waves.

Any 'UPPER_CASE' variables will be exported as a key-value pair
in the `SETTINGS` dictionary defined at the bottom of this file.
"""

from os import environ, path

from dotenv import load_dotenv

load_dotenv()

### Configure application environment ###
ENV = environ.get("ENV", "prod")
assert ENV in (
    "dev",
    "test",
    "prod",
), "ENV environment variable must be set to 'dev', 'test', or 'prod'"
TESTING = environ.get("TESTING") == "True"
LOG_LEVEL = environ.get("WCUSP_LOG_LEVEL")
CI_MESH = environ.get("WCUSP_CI_MESH") == "True"

### Algebraic locators ###
POLISH_TOL = 1e-12
ROOT_MERGE_TOL = 1e-7
FOLD_BISECT_TOL = 1e-10
NEWTON_MAX_ITER = 100
PITCHFORK_RESIDUAL_TOL = 1e-11
PITCHFORK_BETA_STEP = 0.01

### Front shooting ###
SHOOT_RTOL = 1e-10
SHOOT_ATOL = 1e-12
SHOOT_BOX = 50.0
SHOOT_BRACKET = (-10.0, 10.0)
SHOOT_SPEED_TOL = 1e-10
SHOOT_OFFSET = 1e-8
SHOOT_MAX_SPAN = 1e3
SPEED_AGREEMENT_TOL = 1e-6

### Skeleton construction ###
FOLD_PROXIMITY = 1e-4
GRAZING_TOL = 1e-6
QUAD_EPSABS = 1e-10
QUAD_LIMIT = 200
REDUCED_RTOL = 1e-10
REDUCED_ATOL = 1e-12
REST_PROXIMITY = 1e-8
EQUAL_AREA_GRID = 2000
EQUAL_AREA_XTOL = 1e-13
JUMP_PROFILE_SAMPLES = 201
# the CI profile scans coarser; brentq still refines each bracket to full precision
STANDING_DEPARTURE_SAMPLES = 24 if CI_MESH else 120
STANDING_LOCUS_SAMPLES = 60 if CI_MESH else 200
SKELETON_OFFSET = 1e-8
BURST_MAX_JUMPS = 5000
SKELETON_ESCAPE = 10.0
SEAM_TOL = 1e-6
MANIFOLD_TOL = 1e-8
C1D_SAMPLES = 6
JUMP_TABLE_ROWS = 13
SPIKE_SWEEP_EPS_RANGE = (0.05, 1.0)
SPIKE_SWEEP_POINTS = 4 if CI_MESH else 13

### PDE integration ###
BOUNDING_BOX = 100.0
STEP_TOL = 1e-3
DT_MIN = 1e-12
DT_GROWTH = 2.0
DEFAULT_AMPLITUDE = 1.0

### Pattern classification ###
TRAVEL_DX_FACTOR = 10.0
DRIFT_DX_FACTOR = 5.0
PROMINENCE_FRACTION = 0.1
STATIONARITY_THRESHOLD = 1e-3
SPEED_CV_MAX = 0.1
TRAVEL_WOBBLE_RATIO = 2.0
ACTIVITY_MIN_AMPLITUDE = 0.05
FINAL_WINDOW_FRACTION = 0.2
QUASI_STEADY_MAX_MISMATCH = 0.05

### Artifacts ###
OUTPUT_DIR = environ.get("WCUSP_OUTPUT_DIR", "artifacts")
RECORD_SCHEMA_VERSION = "1"
this_directory = path.dirname(path.abspath(__file__))
FIGURES_DIR = path.join(this_directory, "..", "figures")

# Accumulate all constants defined in this file in a single dictionary
SETTINGS = {k: v for k, v in globals().items() if k.isupper()}
