//! Python module `grschase`: GRS codes, the Chase decoder, the channel
//! simulator and the per-edge benchmark.

use std::sync::Arc;

use grs_chase as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_gf(code: &core::GrsCode, v: &[u32]) -> PyResult<Vec<core::Gf>> {
    v.iter().map(|&x| code.field().elem(x).map_err(err)).collect()
}

fn from_gf(v: &[core::Gf]) -> Vec<u32> {
    v.iter().map(|g| g.0 as u32).collect()
}

fn pairs(e: &core::ErrorEstimate) -> Vec<(usize, u32)> {
    e.positions().iter().zip(e.values()).map(|(&p, v)| (p, v.0 as u32)).collect()
}

/// Generalised Reed-Solomon code over GF(2^m) with odd minimum distance d.
#[pyclass(name = "GrsCode", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGrsCode {
    inner: core::GrsCode,
}

#[pymethods]
impl PyGrsCode {
    #[new]
    #[pyo3(signature = (m, d, prim_poly=None, a_tilde=None))]
    fn new(m: u32, d: usize, prim_poly: Option<u32>, a_tilde: Option<Vec<u32>>) -> PyResult<Self> {
        let field = match prim_poly {
            Some(p) => core::FieldCtx::new(m, p),
            None => core::FieldCtx::with_default_poly(m),
        }
        .map_err(err)?;
        let field = Arc::new(field);
        let inner = match a_tilde {
            None => core::GrsCode::reed_solomon(field, d),
            Some(a) => {
                let a = a.iter().map(|&x| field.elem(x)).collect::<core::Result<Vec<_>>>().map_err(err)?;
                core::GrsCode::new(field, d, a)
            }
        }
        .map_err(err)?;
        Ok(PyGrsCode { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.field().q()
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        let m = to_gf(&self.inner, &message)?;
        Ok(from_gf(&self.inner.encode(&m).map_err(err)?))
    }

    /// Syndrome coefficients S_0 .. S_{d-2}.
    fn syndrome(&self, word: Vec<u32>) -> PyResult<Vec<u32>> {
        let y = to_gf(&self.inner, &word)?;
        Ok(from_gf(self.inner.syndrome(&y).map_err(err)?.coeffs()))
    }

    fn is_codeword(&self, word: Vec<u32>) -> PyResult<bool> {
        let y = to_gf(&self.inner, &word)?;
        Ok(self.inner.syndrome(&y).map_err(err)?.is_zero())
    }

    /// Bounded-distance decoding; the corrected word or None.
    fn decode_hd(&self, word: Vec<u32>) -> PyResult<Option<Vec<u32>>> {
        let y = to_gf(&self.inner, &word)?;
        let s = self.inner.syndrome(&y).map_err(err)?;
        Ok(self.inner.decode_hd(&s).map(|e| {
            let ev = e.as_vector(y.len());
            y.iter().zip(ev).map(|(&a, b)| (a - b).0 as u32).collect()
        }))
    }

    fn __repr__(&self) -> String {
        format!("GrsCode(q={}, n={}, k={}, d={})", self.q(), self.n(), self.k(), self.d())
    }
}

#[pyclass(name = "DecodeResult", frozen, get_all)]
pub struct PyDecodeResult {
    /// True when bounded-distance decoding succeeded and the tree was skipped.
    hd_success: bool,
    codeword: Option<Vec<u32>>,
    /// Each candidate as a list of (position, error value).
    candidates: Vec<Vec<(usize, u32)>>,
    selected_index: Option<usize>,
    unreliable: Vec<usize>,
    nodes: u64,
    edges: u64,
    mults: u64,
}

#[pymethods]
impl PyDecodeResult {
    fn __repr__(&self) -> String {
        format!(
            "DecodeResult(hd_success={}, candidates={}, selected_index={:?})",
            self.hd_success,
            self.candidates.len(),
            self.selected_index
        )
    }
}

fn parse_kernel(s: &str) -> PyResult<core::KernelKind> {
    s.parse().map_err(err)
}

/// Chase decoder over the `eta` least reliable coordinates.
#[pyclass(name = "Decoder", frozen)]
pub struct PyDecoder {
    inner: core::Decoder,
}

#[pymethods]
impl PyDecoder {
    #[new]
    #[pyo3(signature = (code, eta=4, mu=2, r_max=2, kernel="B", rule="inversion", heuristic=false, gmd=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        code: &PyGrsCode,
        eta: usize,
        mu: usize,
        r_max: usize,
        kernel: &str,
        rule: &str,
        heuristic: bool,
        gmd: bool,
    ) -> PyResult<Self> {
        let rule = match rule.to_ascii_lowercase().as_str() {
            "inversion" => core::UpdateRule::Inversion,
            "cross-scaled" | "cross_scaled" => core::UpdateRule::CrossScaled,
            other => return Err(PyValueError::new_err(format!("unknown update rule {other:?}"))),
        };
        let cfg = core::ChaseConfig {
            eta,
            mu,
            r_max,
            kernel: parse_kernel(kernel)?,
            rule,
            stop: if heuristic {
                core::StopMode::Heuristic
            } else {
                core::StopMode::Exhaustive
            },
            gmd,
        };
        Ok(PyDecoder {
            inner: core::Decoder::new(code.inner.clone(), cfg).map_err(err)?,
        })
    }

    /// `reliabilities[i]` is the probability of `received[i]`;
    /// `alternatives` optionally ranks other symbols per coordinate.
    #[pyo3(signature = (received, reliabilities, alternatives=None))]
    fn decode(
        &self,
        py: Python<'_>,
        received: Vec<u32>,
        reliabilities: Vec<f64>,
        alternatives: Option<Vec<Vec<u32>>>,
    ) -> PyResult<PyDecodeResult> {
        let code = self.inner.code();
        let y = to_gf(code, &received)?;
        let alts = alternatives
            .unwrap_or_default()
            .iter()
            .map(|a| to_gf(code, a))
            .collect::<PyResult<Vec<_>>>()?;
        let info = core::ReliabilityInfo::from_scores(code.field().q(), &y, &reliabilities, &alts).map_err(err)?;
        let r = py.detach(|| self.inner.decode(&info)).map_err(err)?;
        Ok(PyDecodeResult {
            hd_success: r.hd.is_some(),
            codeword: r.codeword.as_deref().map(from_gf),
            candidates: r.candidates.iter().map(|c| pairs(&c.error)).collect(),
            selected_index: r.selected_index,
            unreliable: r.unreliable,
            nodes: r.stats.nodes,
            edges: r.stats.edges,
            mults: r.stats.ops.mults,
        })
    }
}

/// Send `codeword` through a channel; returns (hard decisions, probability
/// of each hard decision).
#[pyfunction]
#[pyo3(signature = (codeword, q, channel="symmetric", param=0.05, seed=0, stream=0))]
fn transmit(codeword: Vec<u32>, q: usize, channel: &str, param: f64, seed: u64, stream: u64) -> PyResult<(Vec<u32>, Vec<f64>)> {
    let model = match channel {
        "symmetric" => core::ChannelModel::Symmetric { p: param },
        "soft" => core::ChannelModel::Soft { sigma: param },
        other => return Err(PyValueError::new_err(format!("unknown channel {other:?}"))),
    };
    model.validate().map_err(err)?;
    if codeword.iter().any(|&x| x as usize >= q) {
        return Err(PyValueError::new_err("symbol out of range"));
    }
    let x: Vec<core::Gf> = codeword.iter().map(|&v| core::Gf(v as u16)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let info = core::transmit(&x, q, model, &mut rng);
    let hard = info.hard();
    let probs = info.post.iter().zip(&hard).map(|(p, &h)| p.prob(h)).collect();
    Ok((from_gf(&hard), probs))
}

/// Largest multiplication count per all-nonzero edge at each depth, as
/// (depth, edges, max_mults, bound) tuples.
#[pyfunction]
#[pyo3(name = "bench", signature = (code, kernel, r_max=3, eta=5, trials=100, seed=1))]
fn bench_edges(
    py: Python<'_>,
    code: &PyGrsCode,
    kernel: &str,
    r_max: usize,
    eta: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<(usize, u64, u64, Option<u64>)>> {
    let kind = parse_kernel(kernel)?;
    let rows = py
        .detach(|| core::bench_kernel(&code.inner, kind, r_max, eta, trials, seed))
        .map_err(err)?;
    Ok(rows.iter().map(|r| (r.depth, r.edges, r.max_mults, r.bound)).collect())
}

#[pymodule]
fn grschase(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrsCode>()?;
    m.add_class::<PyDecoder>()?;
    m.add_class::<PyDecodeResult>()?;
    m.add_function(wrap_pyfunction!(transmit, m)?)?;
    m.add_function(wrap_pyfunction!(bench_edges, m)?)?;
    m.add("KERNELS", core::KernelKind::ALL.iter().map(|k| k.to_string()).collect::<Vec<_>>())?;
    Ok(())
}
