"""
Frequency-sparse signals: building, sampling, and noising
=========================================================

A frequency-sparse signal is a handful of sinusoids, each described by an
angular frequency in (0, pi), an amplitude, and a phase.  This script walks
through the domain types and the two synthesis conventions.
"""

import math

import numpy as np

from cstones import (
    NoiseSpec,
    SignalModel,
    SinusoidParams,
    add_noise,
    draw_model,
    sinusoid_samples,
    synthesize,
)

# One component, written explicitly.  Phases are canonicalized to (-pi, pi]
# on construction.
tone = SinusoidParams(omega=0.7, amplitude=1.0, phase=math.pi / 4)
print("single tone:", tone)

# A model bundles components with a sample count N.  Samples run t = 1..N.
model = SignalModel(components=(tone,), n_samples=16)
s = synthesize(model)
print("first five samples:", np.round(s[:5], 4))

# The same samples through the linear (a1, a2) parameterization:
# a*sin(wt + p) = a1*sin(wt) + a2*cos(wt).
a1, a2 = tone.linear_amplitudes
sin_w, cos_w = sinusoid_samples(tone.omega, 16)
print("linear form agrees:", np.allclose(s, a1 * sin_w + a2 * cos_w))

# Random well-separated models; this is the experiment generator.  The
# "freq" preset uses unit amplitudes and zero phases, "sinu" randomizes both.
rng_model = draw_model(k=3, n=128, min_sep=math.pi / 128, preset="sinu", seed=42)
print("drawn frequencies:", np.round(rng_model.frequencies, 4))
print("min pairwise gap :", round(float(np.min(np.diff(np.sort(rng_model.frequencies)))), 4))

# Additive Gaussian noise at a target SNR, reproducible per seed.
clean = synthesize(rng_model)
noisy = add_noise(clean, NoiseSpec(snr_db=20.0, seed=7))
realized = 10 * math.log10(float(clean @ clean) / float((noisy - clean) @ (noisy - clean)))
print(f"realized SNR at 20 dB target: {realized:.2f} dB")

# Models serialize to a flat JSON record for fixtures.
print("JSON record:", rng_model.to_json()[:80], "...")
round_tripped = SignalModel.from_json(rng_model.to_json())
print("round trip equal:", round_tripped == rng_model)
