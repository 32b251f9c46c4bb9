"""Walk through the core network semantics on a tiny hand-checkable model.

Two input neurons feed one output neuron with weight 0.6 each.  The
potential is pinned to zero at t=0, accumulates arrived spikes from t=1,
and the neuron fires one synaptic delay after its first threshold
crossing.
"""

import numpy as np

from snnverify import ModelConfig, SnnModel, SpikeTimes, predict, simulate, validate_trace

model = SnnModel(
    ModelConfig(T=4, tau=1, theta=1.0, layer_sizes=(2, 1)),
    [np.array([[0.6], [0.6]])],
)
x = SpikeTimes(layer=0, times=(0, 1))

trace = simulate(model, x)
print("input spike times:   ", x.times)
print("output potentials:   ", trace.potentials[0][:, 0].tolist())
print("output spiked flags: ", trace.spiked_flags[0][:, 0].tolist())
print("output spike time:   ", trace.spike_times[1].times)

pred = predict(trace)
print(f"prediction: label={pred.label} at t={pred.winner_time} strict={pred.strict}")

# the trace satisfies every defining rule
print("violations:", validate_trace(model, trace) or "none")

# zero weights can never reach the threshold: the forced spike at T-1 kicks in
lazy = SnnModel(ModelConfig(T=4, tau=1, theta=1.0, layer_sizes=(2, 2)),
                [np.zeros((2, 2))])
lazy_trace = simulate(lazy, x)
print("zero-weight outputs:", lazy_trace.spike_times[1].times, "(forced last-step spikes)")
print("zero-weight prediction strict?", predict(lazy_trace).strict)
