//! Python bindings: thin wrappers over the core types plus the handful of
//! operations a notebook actually wants (distortion distributions, the two
//! searches, the bus model, the selection state machine).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vdb_core as vc;

fn err(e: vc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Probability mass over the 2^width input words.
#[pyclass(name = "InputDistribution", skip_from_py_object)]
#[derive(Clone)]
struct PyInputDistribution {
    inner: vc::InputDistribution,
}

#[pymethods]
impl PyInputDistribution {
    #[staticmethod]
    fn uniform(width: u8) -> PyResult<Self> {
        Ok(Self {
            inner: vc::InputDistribution::uniform(width).map_err(err)?,
        })
    }

    #[staticmethod]
    fn point_mass(width: u8, value: u16) -> PyResult<Self> {
        Ok(Self {
            inner: vc::InputDistribution::point_mass(width, value).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_pmf(width: u8, pmf: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: vc::InputDistribution::from_pmf(width, pmf).map_err(err)?,
        })
    }

    #[staticmethod]
    fn empirical(width: u8, samples: Vec<u16>) -> PyResult<Self> {
        Ok(Self {
            inner: vc::InputDistribution::empirical(width, &samples).map_err(err)?,
        })
    }

    #[getter]
    fn width(&self) -> u8 {
        self.inner.width()
    }

    #[getter]
    fn pmf(&self) -> Vec<f64> {
        self.inner.pmf().to_vec()
    }

    fn probability(&self, word: u16) -> f64 {
        self.inner.probability(word)
    }

    fn __repr__(&self) -> String {
        format!("InputDistribution(width={})", self.inner.width())
    }
}

/// Per-bit error probabilities, optionally conditioned on the word sent.
#[pyclass(name = "ChannelModel", skip_from_py_object)]
#[derive(Clone)]
struct PyChannelModel {
    inner: vc::ChannelModel,
}

#[pymethods]
impl PyChannelModel {
    #[staticmethod]
    fn symmetric(width: u8, p_down: f64, p_up: f64) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ChannelModel::symmetric(width, p_down, p_up).map_err(err)?,
        })
    }

    #[staticmethod]
    fn per_bit(p_down: Vec<f64>, p_up: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ChannelModel::word_independent(p_down, p_up).map_err(err)?,
        })
    }

    #[staticmethod]
    fn noiseless(width: u8) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ChannelModel::noiseless(width).map_err(err)?,
        })
    }

    #[getter]
    fn width(&self) -> u8 {
        self.inner.width()
    }

    fn p_down(&self, word: u16, bit: u8) -> f64 {
        self.inner.p_down(word, bit)
    }

    fn p_up(&self, word: u16, bit: u8) -> f64 {
        self.inner.p_up(word, bit)
    }

    fn __repr__(&self) -> String {
        format!("ChannelModel(width={})", self.inner.width())
    }
}

/// Distribution of the absolute integer deviation |u(x) - u(x_hat)|.
#[pyclass(name = "DistortionDistribution", skip_from_py_object)]
#[derive(Clone)]
struct PyDistortionDistribution {
    inner: vc::DistortionDistribution,
}

#[pymethods]
impl PyDistortionDistribution {
    #[getter]
    fn width(&self) -> u8 {
        self.inner.width()
    }

    #[getter]
    fn pmf(&self) -> Vec<f64> {
        self.inner.pmf().to_vec()
    }

    /// tail[m] = P(M > m); exactly zero at the top magnitude.
    #[getter]
    fn tail(&self) -> Vec<f64> {
        self.inner.tail().to_vec()
    }

    fn pmf_at(&self, m: u32) -> f64 {
        self.inner.pmf_at(m)
    }

    fn tail_at(&self, m: u32) -> f64 {
        self.inner.tail_at(m)
    }

    fn __repr__(&self) -> String {
        format!(
            "DistortionDistribution(width={}, tail0={:.6})",
            self.inner.width(),
            self.inner.tail_at(0)
        )
    }
}

/// Non-increasing upper bound the induced tail must stay under.
#[pyclass(name = "ConstraintTail", skip_from_py_object)]
#[derive(Clone)]
struct PyConstraintTail {
    inner: vc::ConstraintTail,
}

#[pymethods]
impl PyConstraintTail {
    #[new]
    fn new(width: u8, values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ConstraintTail::new(width, values).map_err(err)?,
        })
    }

    #[staticmethod]
    fn unconstrained(width: u8) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ConstraintTail::unconstrained(width).map_err(err)?,
        })
    }

    #[getter]
    fn width(&self) -> u8 {
        self.inner.width()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }
}

/// Per-bit (down, up) flip probabilities on a dyadic lattice.
#[pyclass(name = "ProbabilityVector", skip_from_py_object)]
#[derive(Clone)]
struct PyProbabilityVector {
    inner: vc::ProbabilityVector,
}

#[pymethods]
impl PyProbabilityVector {
    #[new]
    fn new(down: Vec<f64>, up: Vec<f64>, resolution_log2: u8) -> PyResult<Self> {
        Ok(Self {
            inner: vc::ProbabilityVector::new(down, up, resolution_log2).map_err(err)?,
        })
    }

    #[getter]
    fn down(&self) -> Vec<f64> {
        self.inner.down().to_vec()
    }

    #[getter]
    fn up(&self) -> Vec<f64> {
        self.inner.up().to_vec()
    }

    #[getter]
    fn resolution_log2(&self) -> u8 {
        self.inner.resolution_log2()
    }

    fn as_channel(&self) -> PyChannelModel {
        PyChannelModel {
            inner: self.inner.as_channel(),
        }
    }

    fn __repr__(&self) -> String {
        format!("ProbabilityVector(down={:?}, up={:?})", self.inner.down(), self.inner.up())
    }
}

/// Outcome of a search: the winning vector, its benefit and induced tail.
#[pyclass(name = "SearchResult")]
struct PySearchResult {
    inner: vc::SearchResult,
}

#[pymethods]
impl PySearchResult {
    #[getter]
    fn best(&self) -> PyProbabilityVector {
        PyProbabilityVector {
            inner: self.inner.best.clone(),
        }
    }

    #[getter]
    fn benefit(&self) -> f64 {
        self.inner.benefit
    }

    #[getter]
    fn induced(&self) -> PyDistortionDistribution {
        PyDistortionDistribution {
            inner: self.inner.induced.clone(),
        }
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations
    }

    #[getter]
    fn feasible(&self) -> bool {
        self.inner.feasible
    }

    #[getter]
    fn step_benefits(&self) -> Vec<f64> {
        self.inner.step_benefits.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "SearchResult(benefit={:.6}, feasible={}, evaluations={})",
            self.inner.benefit, self.inner.feasible, self.inner.evaluations
        )
    }
}

/// Electrical description of the bus: supply, threshold, pull-up paths,
/// capacitance, noise and the DCP resistance table.
#[pyclass(name = "CircuitParams", skip_from_py_object)]
#[derive(Clone)]
struct PyCircuitParams {
    inner: vc::CircuitParams,
}

#[pymethods]
impl PyCircuitParams {
    #[new]
    #[pyo3(signature = (v_supply, v_th, r_off, r_on, c_bus, sigma_n, t_clk, dcp_table, r_ipu=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        v_supply: f64,
        v_th: f64,
        r_off: f64,
        r_on: f64,
        c_bus: f64,
        sigma_n: f64,
        t_clk: f64,
        dcp_table: Vec<f64>,
        r_ipu: Option<f64>,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: vc::CircuitParams {
                v_supply,
                v_th,
                r_ipu,
                r_off,
                r_on,
                c_bus,
                sigma_n,
                t_clk,
                dcp_table,
            }
            .checked()
            .map_err(err)?,
        })
    }

    /// "warp-100k" or "warp-10k".
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: vc::CircuitParams::preset(name).map_err(err)?,
        })
    }

    #[getter]
    fn v_supply(&self) -> f64 {
        self.inner.v_supply
    }

    #[getter]
    fn v_th(&self) -> f64 {
        self.inner.v_th
    }

    #[getter]
    fn r_ipu(&self) -> Option<f64> {
        self.inner.r_ipu
    }

    #[getter]
    fn r_off(&self) -> f64 {
        self.inner.r_off
    }

    #[getter]
    fn c_bus(&self) -> f64 {
        self.inner.c_bus
    }

    #[getter]
    fn sigma_n(&self) -> f64 {
        self.inner.sigma_n
    }

    #[getter]
    fn taps(&self) -> usize {
        self.inner.dcp_table.len()
    }

    fn r_dcp(&self, setting: usize) -> PyResult<f64> {
        self.inner.r_dcp(setting).map_err(err)
    }

    fn r_pu_eq(&self, setting: usize) -> PyResult<f64> {
        self.inner.r_pu_eq(setting).map_err(err)
    }
}

/// Pull-up tap schedule for one byte plus the nominal tap for protocol
/// cycles.
#[pyclass(name = "DcpProfile", skip_from_py_object)]
#[derive(Clone)]
struct PyDcpProfile {
    inner: vc::DcpProfile,
}

#[pymethods]
impl PyDcpProfile {
    #[new]
    fn new(settings: [usize; 8], nominal: usize) -> Self {
        Self {
            inner: vc::DcpProfile { settings, nominal },
        }
    }

    #[staticmethod]
    fn uniform(setting: usize, nominal: usize) -> Self {
        Self {
            inner: vc::DcpProfile::uniform(setting, nominal),
        }
    }

    #[getter]
    fn settings(&self) -> [usize; 8] {
        self.inner.settings
    }

    #[getter]
    fn nominal(&self) -> usize {
        self.inner.nominal
    }
}

/// Register file and word framing of the per-bit selection machine.
#[pyclass(name = "AdaptationConfig", skip_from_py_object)]
#[derive(Clone)]
struct PyAdaptationConfig {
    inner: vc::AdaptationConfig,
}

#[pymethods]
impl PyAdaptationConfig {
    /// `registers` holds R_0..R_L, one more entry than the word length.
    #[new]
    #[pyo3(signature = (word_length, registers, selection_bits=8))]
    fn new(word_length: u8, registers: Vec<u16>, selection_bits: u8) -> PyResult<Self> {
        Ok(Self {
            inner: vc::AdaptationConfig::with_selection_bits(word_length, registers, selection_bits)
                .map_err(err)?,
        })
    }

    #[getter]
    fn word_length(&self) -> u8 {
        self.inner.word_length()
    }

    #[getter]
    fn registers(&self) -> Vec<u16> {
        self.inner.registers().to_vec()
    }
}

/// Exact distortion distribution of a channel under an input.
#[pyfunction]
fn distortion_pmf(
    channel: &PyChannelModel,
    input: &PyInputDistribution,
) -> PyResult<PyDistortionDistribution> {
    Ok(PyDistortionDistribution {
        inner: vc::distortion_pmf_fast(&channel.inner, &input.inner).map_err(err)?,
    })
}

/// Word-by-word reference computation; same result, exponential cost.
#[pyfunction]
fn brute_force_oracle(
    channel: &PyChannelModel,
    input: &PyInputDistribution,
) -> PyResult<PyDistortionDistribution> {
    Ok(PyDistortionDistribution {
        inner: vc::brute_force_oracle(&channel.inner, &input.inner).map_err(err)?,
    })
}

/// Seeded empirical distribution from simulated transmissions.
#[pyfunction]
fn monte_carlo_distortion(
    channel: &PyChannelModel,
    input: &PyInputDistribution,
    samples: u64,
    seed: u64,
) -> PyResult<PyDistortionDistribution> {
    Ok(PyDistortionDistribution {
        inner: vc::monte_carlo_distortion(&channel.inner, &input.inner, samples, seed)
            .map_err(err)?,
    })
}

/// Squared norm of the probability vector.
#[pyfunction]
fn benefit(p: &PyProbabilityVector) -> f64 {
    vc::benefit(&p.inner)
}

#[pyfunction]
fn satisfies_constraint(
    d: &PyDistortionDistribution,
    t: &PyConstraintTail,
) -> PyResult<bool> {
    vc::satisfies_constraint(&d.inner, &t.inner).map_err(err)
}

/// Grid search over one (down, up) pair shared by every bit.
#[pyfunction]
#[pyo3(signature = (input, constraint, resolution_log2=7))]
fn exhaustive_search_bit_independent(
    input: &PyInputDistribution,
    constraint: &PyConstraintTail,
    resolution_log2: u8,
) -> PyResult<PySearchResult> {
    Ok(PySearchResult {
        inner: vc::exhaustive_search_bit_independent(&input.inner, &constraint.inner, resolution_log2)
            .map_err(err)?,
    })
}

/// Six-pass refinement over per-bit vectors; `symmetric=True` lets each
/// pass retreat as well as grow.
#[pyfunction]
#[pyo3(signature = (input, constraint, symmetric=false))]
fn adaptive_search_bit_level(
    input: &PyInputDistribution,
    constraint: &PyConstraintTail,
    symmetric: bool,
) -> PyResult<PySearchResult> {
    let nb = if symmetric {
        vc::Neighborhood::Symmetric
    } else {
        vc::Neighborhood::NonNegative
    };
    Ok(PySearchResult {
        inner: vc::adaptive_search_bit_level_with(&input.inner, &constraint.inner, nb)
            .map_err(err)?,
    })
}

/// Seeded feasibility bound; returns (constraint, drawn per-bit vector).
#[pyfunction]
fn generate_random_constraint(width: u8, seed: u64) -> PyResult<(PyConstraintTail, Vec<f64>)> {
    let (t, p) = vc::generate_random_constraint(width, seed).map_err(err)?;
    Ok((PyConstraintTail { inner: t }, p))
}

/// Tail when the drawn vector acts on both polarities.
#[pyfunction]
fn oracle_tail(
    p_rand: Vec<f64>,
    input: &PyInputDistribution,
) -> PyResult<PyDistortionDistribution> {
    Ok(PyDistortionDistribution {
        inner: vc::oracle_tail(&p_rand, &input.inner).map_err(err)?,
    })
}

/// Channel induced by driving the byte through a pull-up schedule.
#[pyfunction]
fn channel_from_profile(
    profile: &PyDcpProfile,
    params: &PyCircuitParams,
) -> PyResult<PyChannelModel> {
    Ok(PyChannelModel {
        inner: vc::channel_from_profile(&profile.inner, &params.inner).map_err(err)?,
    })
}

/// First-order bus power at one tap: conduction plus switching.
#[pyfunction]
fn power_estimate(
    params: &PyCircuitParams,
    setting: usize,
    duty0: f64,
    f_switch: f64,
) -> PyResult<f64> {
    vc::power_estimate(&params.inner, setting, duty0, f_switch).map_err(err)
}

/// Selection trace of a transaction of `words` zero words over `cycles`
/// clock cycles (one negative edge per cycle).
#[pyfunction]
fn selection_trace(cfg: &PyAdaptationConfig, words: usize, cycles: usize) -> PyResult<Vec<u16>> {
    let zero = vc::Word::new(0, cfg.inner.word_length()).map_err(err)?;
    vc::fsm::simulate_transaction(&cfg.inner, &vec![zero; words], cycles).map_err(err)
}

/// Selections for an explicit per-cycle (negedge, start) stimulus.
#[pyfunction]
fn run_stimulus(cfg: &PyAdaptationConfig, stimulus: Vec<(bool, bool)>) -> Vec<u16> {
    let cycles: Vec<vc::StimulusCycle> = stimulus
        .iter()
        .enumerate()
        .map(|(i, &(scl_negedge, s_start))| vc::StimulusCycle {
            cycle: i as u64,
            scl_negedge,
            s_start,
        })
        .collect();
    vc::fsm::run_stimulus(&cfg.inner, &cycles)
}

#[pymodule]
fn vdbpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInputDistribution>()?;
    m.add_class::<PyChannelModel>()?;
    m.add_class::<PyDistortionDistribution>()?;
    m.add_class::<PyConstraintTail>()?;
    m.add_class::<PyProbabilityVector>()?;
    m.add_class::<PySearchResult>()?;
    m.add_class::<PyCircuitParams>()?;
    m.add_class::<PyDcpProfile>()?;
    m.add_class::<PyAdaptationConfig>()?;
    m.add_function(wrap_pyfunction!(distortion_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_distortion, m)?)?;
    m.add_function(wrap_pyfunction!(benefit, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies_constraint, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_search_bit_independent, m)?)?;
    m.add_function(wrap_pyfunction!(adaptive_search_bit_level, m)?)?;
    m.add_function(wrap_pyfunction!(generate_random_constraint, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_tail, m)?)?;
    m.add_function(wrap_pyfunction!(channel_from_profile, m)?)?;
    m.add_function(wrap_pyfunction!(power_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(selection_trace, m)?)?;
    m.add_function(wrap_pyfunction!(run_stimulus, m)?)?;
    m.add("MAX_WIDTH", vc::MAX_WIDTH)?;
    Ok(())
}
