import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, default))


# Curve Settings
CURVE_CONFIG = {
    "sample_count": _env_int("SQUAREPEG_CURVE_SAMPLES", 1024),
    "curvature_samples": _env_int("SQUAREPEG_CURVATURE_SAMPLES", 1024),
    "simplicity_resolution": _env_int("SQUAREPEG_SIMPLICITY_RESOLUTION", 512),
    "regularity_factor": 1e-8,  # |γ′| ≥ factor × total_length / 2π
    "quadrature_factor": 1e-10,  # absolute quadrature tolerance × total_length
    "lift_tolerance": 1e-6,  # successive lift gaps must stay below π − tol
    "projection_seeds": _env_int("SQUAREPEG_PROJECTION_SEEDS", 256),
    "projection_ambiguity": 1e-9,
    "table_gauss_points": 8,
}

# Square Search Settings
SEARCH_CONFIG = {
    "grid_n": _env_int("SQUAREPEG_GRID", 64),
    "polyline_grid_factor": 2,  # grid_n = factor × vertex count for polylines
    "polyline_grid_cap": _env_int("SQUAREPEG_POLYLINE_GRID_CAP", 800),
    "tol_factor": _env_float("SQUAREPEG_TOL_FACTOR", 1e-11),  # × total_length
    "polyline_tol_factor": 1e-8,
    "max_iter": 50,
    "max_condition": 1e12,
    "min_sidelength_factor": 1e-6,  # × total_length
    "dedup_factor": 1e-6,  # × total_length
    "seed_threshold": 0.35,  # relative diagonal score
    "max_seeds": 2000,
    "distance_oversampling": 16,
    "continuum_rcond": 1e-7,
    "oracle_max_grid": 64,
    "oracle_samples": 16384,
    "workers": _env_int("SQUAREPEG_WORKERS", 1),
}

# Size Metric Settings
SIZE_CONFIG = {
    "arc_samples": 256,
    "max_samples": 16384,
    "lift_rel_tol": 1e-8,
    "correspondence_samples": _env_int("SQUAREPEG_CORRESPONDENCE_SAMPLES", 512),
}

# Continuation Settings
CONTINUATION_CONFIG = {
    "initial_step": 0.02,
    "max_step": 0.05,
    "step_floor": 1e-7,
    "corrector_tol_factor": 1e-11,
    "corrector_max_iter": 8,
    "zero_square_factor": 1e-4,  # sidelength ≤ factor × total_length
    "max_steps": 5000,
    "retries": 5,
    "perturbation_scale": 1e-3,
    "regularity_grid": (256, 41),  # (s samples, t samples)
    "slice_harmonics": 48,
    "correspondence_harmonics": 32,
    "stage_boundary": 0.5,
    "continuity_slack": 1e-6,
    "correspondence_samples": 512,
    "fd_step": 1e-6,
}

# Verification Settings
VERIFY_CONFIG = {
    "tolerance": 1e-6,
    "chord_tolerance": 1e-9,
    "band_factor": 1e-3,  # band = factor / κ around π/(4κ)
    "chord_trials": 10000,
    "arcsin_samples": 10000,
    "polyline_projection_factor": 4,  # projection samples per polyline vertex
}

# Rendering Settings
RENDER_CONFIG = {
    "canvas": 800,  # pixels per side
    "dpi": 100,
    "curve_samples": 720,
    "curve_color": "#1f3b73",
    "square_color": "#c0392b",
    "line_width": 1.5,
    "font_size": 10,
    "hashsalt": "squarepeg",
}

# Logging configuration
LOGGING_CONFIG = {
    "level": os.getenv("SQUAREPEG_LOG_LEVEL", "INFO"),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
}
