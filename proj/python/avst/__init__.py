"""Speaker-targeted audio-visual speech recognition toolkit.

Arrays are float64 numpy arrays with frames as rows.  Configs are JSON text
in the schema accepted by the ``avst`` command-line tool.
"""

import json

from ._core import (DataError, Error, Model, NumericError, UsageError, WerReport,
                    acoustic_features, adapt_sd, adapt_st, compute_wer, decode,
                    default_config, extend_for_identity, init_model, load_model,
                    log_mel, mix_waveforms, normalize_features, stack_context,
                    synthesize, train_si)
from ._core import run_matrix as _run_matrix


def run_matrix(config=None, out_dir=None, cache_dir=None):
    """Runs the experiment matrix and returns the report as a dict.

    ``config`` may be JSON text or a dict.
    """
    if isinstance(config, dict):
        config = json.dumps(config)
    return json.loads(_run_matrix(config, out_dir, cache_dir))


__all__ = [
    "DataError", "Error", "Model", "NumericError", "UsageError", "WerReport",
    "acoustic_features", "adapt_sd", "adapt_st", "compute_wer", "decode",
    "default_config", "extend_for_identity", "init_model", "load_model",
    "log_mel", "mix_waveforms", "normalize_features", "run_matrix",
    "stack_context", "synthesize", "train_si",
]
