#pragma once

// Model constants, versioned. Every model factory and every behavioural test reads its numbers
// from here; docs/model_constants.md lists the references they were taken from. Bump `version`
// whenever a value changes.
//
// Units: seconds, volts, dimensionless probabilities. Conductances of the conductance-based
// model are expressed in units of the leak conductance.

namespace spikeforge::models::constants
{
inline namespace v1
{
inline constexpr int version = 1;

inline constexpr float default_dt = 1e-4f; // 0.1 ms

// Current-based LIF network with delta synapses and Poisson drive (Brunel 2000, model A).
namespace brunel
{
inline constexpr unsigned excitatory = 10000;
inline constexpr unsigned inhibitory = 2500;
inline constexpr double connectivity = 0.1;

inline constexpr float tau_m = 20e-3f;
inline constexpr float v_rest = 0.0f;
inline constexpr float v_reset = 10e-3f;
inline constexpr float v_thresh = 20e-3f;
inline constexpr float t_ref = 2e-3f;
inline constexpr int delay_steps = 15; // 1.5 ms

inline constexpr float j_exc = 0.1e-3f;        // PSP amplitude of an excitatory spike
inline constexpr float g_rel = 5.0f;           // relative inhibitory strength
inline constexpr float eta = 2.0f;             // external rate / threshold rate
inline constexpr unsigned external_inputs = 1000; // C_ext = C_E of the base network
} // namespace brunel

// Pair-based STDP on excitatory->excitatory synapses of the Brunel network ("Brunel+").
// Amplitudes and bounds are relative to the (scaled) excitatory weight.
namespace stdp
{
inline constexpr float a_plus = 0.01f;
inline constexpr float a_minus = 0.0105f;
inline constexpr float tau_plus = 20e-3f;
inline constexpr float tau_minus = 20e-3f;
inline constexpr float w_min = 0.0f;
inline constexpr float w_max = 2.0f;
} // namespace stdp

// Conductance-based LIF network (Vogels & Abbott 2005; COBA benchmark of Brette et al. 2007).
namespace vogels
{
inline constexpr unsigned excitatory = 3200;
inline constexpr unsigned inhibitory = 800;
inline constexpr double connectivity = 0.02;

inline constexpr float tau_m = 20e-3f;
inline constexpr float v_rest = -60e-3f;
inline constexpr float v_reset = -60e-3f;
inline constexpr float v_thresh = -50e-3f;
inline constexpr float t_ref = 5e-3f;
inline constexpr int delay_steps = 1;

inline constexpr float e_exc = 0.0f;
inline constexpr float e_inh = -80e-3f;
inline constexpr float tau_exc = 5e-3f;
inline constexpr float tau_inh = 10e-3f;
inline constexpr float w_exc = 0.6f; // 6 nS / 10 nS
inline constexpr float w_inh = 6.7f; // 67 nS / 10 nS

// Initial state: v ~ v_rest + N(-5 mV, 5 mV), g_exc ~ N(4, 1.5), g_inh ~ N(20, 12), clamped at 0.
inline constexpr float v0_offset = -5e-3f;
inline constexpr float v0_sigma = 5e-3f;
inline constexpr float g_exc0_mean = 4.0f;
inline constexpr float g_exc0_sigma = 1.5f;
inline constexpr float g_inh0_mean = 20.0f;
inline constexpr float g_inh0_sigma = 12.0f;
} // namespace vogels

namespace synth
{
inline constexpr double density = 0.00156;
inline constexpr double activity = 0.005;
inline constexpr int delay_steps = 1;
} // namespace synth
} // namespace v1
} // namespace spikeforge::models::constants
