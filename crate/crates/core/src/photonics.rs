//! Single-photon ququart optics: polarization ⊗ orbital angular momentum.
//!
//! The logical ququart basis is `{|H,+2>, |H,-2>, |V,+2>, |V,-2>}`; the OAM
//! register also holds `m = 0`, the mode a photon has in a single-mode fiber.
//!
//! Circular polarization convention (used everywhere in this module):
//!
//! ```text
//! |R> = (|H> - i|V>)/√2        |L> = (|H> + i|V>)/√2
//! ```
//!
//! Under it a quarter-wave plate at 45° turns `|H>` into `|R>`, and the q-plate
//! acts as `|L,m> -> |R,m+2q>`, `|R,m> -> |L,m-2q>` with no extra phases.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// OAM values the register can hold, in storage order.
pub const OAM_REGISTER: [i32; 3] = [-2, 0, 2];

/// Amplitudes below this magnitude are treated as numerical zero when they
/// would leave the register or sit outside the logical subspace.
pub const LEAK_TOLERANCE: f64 = 1e-12;

/// Projected weights below this are an empty port.
const EMPTY_PORT_WEIGHT: f64 = 1e-20;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub type Jones = [Complex64; 2];
pub type JonesMatrix = [[Complex64; 2]; 2];
pub type Ququart = [Complex64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
    /// Diagonal, `(|H> + |V>)/√2`.
    D,
    /// Antidiagonal, `(|H> - |V>)/√2`.
    A,
    R,
    L,
}

impl Polarization {
    pub fn jones(self) -> Jones {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Polarization::H => [ONE, ZERO],
            Polarization::V => [ZERO, ONE],
            Polarization::D => [s, s],
            Polarization::A => [s, -s],
            Polarization::R => [s, -I * s],
            Polarization::L => [s, I * s],
        }
    }
}

fn oam_index(m: i32) -> Option<usize> {
    OAM_REGISTER.iter().position(|&x| x == m)
}

fn mat_vec(m: &JonesMatrix, v: &Jones) -> Jones {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn mat_mul(a: &JonesMatrix, b: &JonesMatrix) -> JonesMatrix {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn jones_inner(a: &Jones, b: &Jones) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn jones_norm(a: &Jones) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

/// Half-wave plate with its fast axis at `deg` from horizontal.
pub fn hwp_matrix(deg: f64) -> JonesMatrix {
    let t = 2.0 * deg.to_radians();
    let (s, c) = t.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(-c, 0.0)],
    ]
}

/// Quarter-wave plate with its fast axis at `deg` from horizontal.
pub fn qwp_matrix(deg: f64) -> JonesMatrix {
    let (s, c) = deg.to_radians().sin_cos();
    let off = Complex64::new(1.0, -1.0) * (s * c);
    [
        [Complex64::new(c * c, s * s), off],
        [off, Complex64::new(s * s, c * c)],
    ]
}

/// Projector onto linear polarization at `deg`.
pub fn polarizer_matrix(deg: f64) -> JonesMatrix {
    let (s, c) = deg.to_radians().sin_cos();
    [
        [Complex64::new(c * c, 0.0), Complex64::new(s * c, 0.0)],
        [Complex64::new(s * c, 0.0), Complex64::new(s * s, 0.0)],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PbsPort {
    #[serde(rename = "transmit_H")]
    TransmitH,
    #[serde(rename = "reflect_V")]
    ReflectV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveplateKind {
    Half,
    Quarter,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpticalElement {
    Hwp { deg: f64 },
    Qwp { deg: f64 },
    /// Topological charge `q`, an integer or half-integer.
    Qplate { q: f64 },
    /// q-plate followed by single-mode-fiber coupling: only light leaving the
    /// plate with `m = 0` is kept; the rest is reported as loss.
    QplateSmf { q: f64 },
    Pbs { port: PbsPort },
    Polarizer { deg: f64 },
    /// Ideal `π -> o2`: `(α|H> + β|V>)|0>  ->  |H>((α-iβ)|+2> + (α+iβ)|-2>)/√2`,
    /// i.e. `|L>|0> -> |H,+2>` and `|R>|0> -> |H,-2>`.
    TransferPiToO2,
    /// Ideal deterministic `o2 -> π`: swaps the polarization qubit with the
    /// OAM qubit under `|H> <-> |+2>`, `|V> <-> |-2>`.
    TransferO2ToPi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub pol: Polarization,
    pub oam: i32,
}

/// Elements applied left to right to a photon prepared as `input`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetupDescriptor {
    pub input: InputSpec,
    pub elements: Vec<OpticalElement>,
}

/// Pure photon state over polarization ⊗ OAM register.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonState {
    /// `amplitudes[p][k]`: polarization `p` (0 = H, 1 = V), OAM `OAM_REGISTER[k]`.
    amplitudes: [[Complex64; 3]; 2],
    /// Product of the weights kept by every lossy element so far.
    pub postselection_probability: f64,
}

impl PhotonState {
    pub fn new(pol: Jones, oam: i32) -> Result<Self> {
        let k = oam_index(oam).ok_or(Error::OamOverflow(oam))?;
        let norm = jones_norm(&pol);
        if norm == 0.0 {
            return Err(Error::ZeroVector(None));
        }
        let mut amplitudes = [[ZERO; 3]; 2];
        amplitudes[0][k] = pol[0] / norm;
        amplitudes[1][k] = pol[1] / norm;
        Ok(PhotonState {
            amplitudes,
            postselection_probability: 1.0,
        })
    }

    pub fn from_input(input: &InputSpec) -> Result<Self> {
        Self::new(input.pol.jones(), input.oam)
    }

    /// State with logical ququart amplitudes `(a1, a2, a3, a4)`, normalized.
    pub fn from_ququart(a: &Ququart) -> Result<Self> {
        let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector(None));
        }
        let mut amplitudes = [[ZERO; 3]; 2];
        amplitudes[0][2] = a[0] / norm;
        amplitudes[0][0] = a[1] / norm;
        amplitudes[1][2] = a[2] / norm;
        amplitudes[1][0] = a[3] / norm;
        Ok(PhotonState {
            amplitudes,
            postselection_probability: 1.0,
        })
    }

    pub fn amplitude(&self, pol: Polarization, oam: i32) -> Complex64 {
        let k = match oam_index(oam) {
            Some(k) => k,
            None => return ZERO,
        };
        let j = pol.jones();
        j[0].conj() * self.amplitudes[0][k] + j[1].conj() * self.amplitudes[1][k]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Weight at a given OAM value, summed over polarization.
    pub fn oam_weight(&self, oam: i32) -> f64 {
        oam_index(oam)
            .map(|k| self.amplitudes[0][k].norm_sqr() + self.amplitudes[1][k].norm_sqr())
            .unwrap_or(0.0)
    }

    /// `|<self|other>|²` for normalized states; global phase never matters.
    pub fn overlap_sqr(&self, other: &PhotonState) -> f64 {
        let ip: Complex64 = self
            .amplitudes
            .iter()
            .flatten()
            .zip(other.amplitudes.iter().flatten())
            .map(|(a, b)| a.conj() * b)
            .sum();
        ip.norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Amplitudes in the logical basis; errors if the `m = 0` mode is occupied.
    pub fn to_ququart(&self) -> Result<Ququart> {
        let residual = self.oam_weight(0);
        if residual > LEAK_TOLERANCE * LEAK_TOLERANCE {
            return Err(Error::IncompleteTransfer(residual));
        }
        Ok([
            self.amplitudes[0][2],
            self.amplitudes[0][0],
            self.amplitudes[1][2],
            self.amplitudes[1][0],
        ])
    }

    fn map_polarization(&mut self, m: &JonesMatrix) {
        for k in 0..3 {
            let out = mat_vec(m, &[self.amplitudes[0][k], self.amplitudes[1][k]]);
            self.amplitudes[0][k] = out[0];
            self.amplitudes[1][k] = out[1];
        }
    }

    /// Keeps `projector` applied to the polarization, renormalises, and books
    /// the kept weight into the postselection probability.
    fn project(&mut self, projector: &JonesMatrix, port: &'static str) -> Result<()> {
        let before = self.norm_sqr();
        self.map_polarization(projector);
        self.keep(before, port)
    }

    fn keep(&mut self, before: f64, port: &'static str) -> Result<()> {
        let kept = self.norm_sqr() / before;
        if kept < EMPTY_PORT_WEIGHT {
            return Err(Error::EmptyPort(port));
        }
        let scale = 1.0 / self.norm_sqr().sqrt();
        for z in self.amplitudes.iter_mut().flatten() {
            *z *= scale;
        }
        self.postselection_probability *= kept;
        Ok(())
    }
}

/// Retarder acting identically on every OAM component.
pub fn apply_waveplate(s: &PhotonState, kind: WaveplateKind, deg: f64) -> PhotonState {
    let m = match kind {
        WaveplateKind::Half => hwp_matrix(deg),
        WaveplateKind::Quarter => qwp_matrix(deg),
    };
    let mut out = s.clone();
    out.map_polarization(&m);
    out
}

fn twice_charge(q: f64) -> Result<i32> {
    let t = 2.0 * q;
    if !t.is_finite() || t.fract() != 0.0 || t.abs() > 64.0 {
        return Err(Error::InvalidElement(format!("q = {q} is not a half-integer")));
    }
    Ok(t as i32)
}

/// Circular-basis components `(R, L)` of a polarization vector.
fn to_circular(p: &Jones) -> (Complex64, Complex64) {
    let r = jones_inner(&Polarization::R.jones(), p);
    let l = jones_inner(&Polarization::L.jones(), p);
    (r, l)
}

fn from_circular(r: Complex64, l: Complex64) -> Jones {
    let rj = Polarization::R.jones();
    let lj = Polarization::L.jones();
    [r * rj[0] + l * lj[0], r * rj[1] + l * lj[1]]
}

/// q-plate: `|L,m> -> |R,m+2q>`, `|R,m> -> |L,m-2q>`.
///
/// With `fiber = true` only components landing on `m = 0` survive and the
/// rest is booked as loss; otherwise leaving the register is an error.
fn qplate(s: &PhotonState, q: f64, fiber: bool) -> Result<PhotonState> {
    let shift = twice_charge(q)?;
    let mut out = [[ZERO; 3]; 2];
    let mut place = |m: i32, pol: Jones| -> Result<()> {
        match oam_index(m) {
            Some(k) if !fiber || m == 0 => {
                out[0][k] += pol[0];
                out[1][k] += pol[1];
                Ok(())
            }
            Some(_) => Ok(()),
            None if fiber || jones_norm(&pol) <= LEAK_TOLERANCE => Ok(()),
            None => Err(Error::OamOverflow(m)),
        }
    };
    for (k, &m) in OAM_REGISTER.iter().enumerate() {
        let (r, l) = to_circular(&[s.amplitudes[0][k], s.amplitudes[1][k]]);
        place(m + shift, from_circular(l, ZERO))?;
        place(m - shift, from_circular(ZERO, r))?;
    }
    let mut next = PhotonState {
        amplitudes: out,
        postselection_probability: s.postselection_probability,
    };
    if fiber {
        next.keep(s.norm_sqr(), "single-mode fiber")?;
    }
    Ok(next)
}

pub fn apply_qplate(s: &PhotonState, q: f64) -> Result<PhotonState> {
    qplate(s, q, false)
}

pub fn apply_pbs(s: &PhotonState, port: PbsPort) -> Result<PhotonState> {
    let (projector, name) = match port {
        PbsPort::TransmitH => ([[ONE, ZERO], [ZERO, ZERO]], "transmit_H"),
        PbsPort::ReflectV => ([[ZERO, ZERO], [ZERO, ONE]], "reflect_V"),
    };
    let mut out = s.clone();
    out.project(&projector, name)?;
    Ok(out)
}

fn transfer_pi_to_o2(s: &PhotonState) -> Result<PhotonState> {
    let stray = s.norm_sqr() - s.oam_weight(0);
    if stray > LEAK_TOLERANCE * LEAK_TOLERANCE {
        return Err(Error::TransferInput(stray));
    }
    let (alpha, beta) = (s.amplitudes[0][1], s.amplitudes[1][1]);
    let mut amplitudes = [[ZERO; 3]; 2];
    amplitudes[0][2] = (alpha - I * beta) * FRAC_1_SQRT_2;
    amplitudes[0][0] = (alpha + I * beta) * FRAC_1_SQRT_2;
    Ok(PhotonState {
        amplitudes,
        postselection_probability: s.postselection_probability,
    })
}

fn transfer_o2_to_pi(s: &PhotonState) -> Result<PhotonState> {
    let stray = s.oam_weight(0);
    if stray > LEAK_TOLERANCE * LEAK_TOLERANCE {
        return Err(Error::TransferInput(stray));
    }
    // pol index 0/1 <-> OAM slot 2 (+2) / 0 (-2)
    let slot = [2usize, 0usize];
    let mut amplitudes = [[ZERO; 3]; 2];
    for p in 0..2 {
        for (o, &k) in slot.iter().enumerate() {
            amplitudes[o][slot[p]] = s.amplitudes[p][k];
        }
    }
    Ok(PhotonState {
        amplitudes,
        postselection_probability: s.postselection_probability,
    })
}

pub fn apply_element(s: &PhotonState, element: &OpticalElement) -> Result<PhotonState> {
    match *element {
        OpticalElement::Hwp { deg } => Ok(apply_waveplate(s, WaveplateKind::Half, deg)),
        OpticalElement::Qwp { deg } => Ok(apply_waveplate(s, WaveplateKind::Quarter, deg)),
        OpticalElement::Qplate { q } => qplate(s, q, false),
        OpticalElement::QplateSmf { q } => qplate(s, q, true),
        OpticalElement::Pbs { port } => apply_pbs(s, port),
        OpticalElement::Polarizer { deg } => {
            let mut out = s.clone();
            out.project(&polarizer_matrix(deg), "polarizer")?;
            Ok(out)
        }
        OpticalElement::TransferPiToO2 => transfer_pi_to_o2(s),
        OpticalElement::TransferO2ToPi => transfer_o2_to_pi(s),
    }
}

pub fn run_elements(s: &PhotonState, elements: &[OpticalElement]) -> Result<PhotonState> {
    elements
        .iter()
        .try_fold(s.clone(), |state, e| apply_element(&state, e))
}

impl SetupDescriptor {
    pub fn run(&self) -> Result<PhotonState> {
        run_elements(&PhotonState::from_input(&self.input)?, &self.elements)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::ParseError::Json(e.to_string()).into())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("setup serializes");
        s.push('\n');
        s
    }
}

/// Runs a preparation setup and returns the logical ququart amplitudes with
/// the probability that the photon survived every lossy element.
pub fn prepare_state(setup: &SetupDescriptor) -> Result<(Ququart, f64)> {
    let out = setup.run()?;
    Ok((out.to_ququart()?, out.postselection_probability))
}

/// `|<analyzer|state>|²` after normalizing both.
pub fn analyze_projection(state: &Ququart, analyzer: &Ququart) -> Result<f64> {
    let ns: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    let na: f64 = analyzer.iter().map(|z| z.norm_sqr()).sum();
    if na == 0.0 || ns == 0.0 {
        return Err(Error::ZeroVector(None));
    }
    let ip: Complex64 = analyzer.iter().zip(state).map(|(a, s)| a.conj() * s).sum();
    Ok(ip.norm_sqr() / (ns * na))
}

/// Probability that a photon in `state` passes every element of an analysis
/// chain. An empty port anywhere along the chain counts as zero.
pub fn measure(state: &PhotonState, elements: &[OpticalElement]) -> Result<f64> {
    match run_elements(state, elements) {
        Ok(out) => Ok(out.postselection_probability / state.postselection_probability),
        Err(Error::EmptyPort(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// `[HWP(a), QWP(b)]` taking `|H>` to `p` up to a global phase.
///
/// The QWP sits on the polarization ellipse's major axis, so undoing it leaves
/// a linear state, which the HWP reaches from `|H>`.
pub fn plates_from_h(p: &Jones) -> Result<[OpticalElement; 2]> {
    let (hwp, qwp) = plate_angles(p)?;
    Ok([OpticalElement::Hwp { deg: hwp }, OpticalElement::Qwp { deg: qwp }])
}

/// Exact inverse of [`plates_from_h`] (up to global phase): takes `p` to `|H>`
/// and acts on the orthogonal state with the matching phase.
pub fn plates_to_h(p: &Jones) -> Result<[OpticalElement; 2]> {
    let (hwp, qwp) = plate_angles(p)?;
    Ok([OpticalElement::Qwp { deg: qwp + 90.0 }, OpticalElement::Hwp { deg: hwp }])
}

fn plate_angles(p: &Jones) -> Result<(f64, f64)> {
    let norm = jones_norm(p);
    if norm == 0.0 {
        return Err(Error::ZeroVector(None));
    }
    let p = [p[0] / norm, p[1] / norm];
    let s1 = p[0].norm_sqr() - p[1].norm_sqr();
    let s2 = 2.0 * (p[0].conj() * p[1]).re;
    let qwp = 0.5 * s2.atan2(s1).to_degrees();
    // QWP(b + 90°) inverts QWP(b) up to global phase.
    let linear = mat_vec(&qwp_matrix(qwp + 90.0), &p);
    let k = if linear[0].norm() >= linear[1].norm() { 0 } else { 1 };
    let phase = linear[k].conj() / linear[k].norm();
    let (x, y) = ((linear[0] * phase).re, (linear[1] * phase).re);
    let hwp = 0.5 * y.atan2(x).to_degrees();
    Ok((hwp, qwp))
}

fn plates_matrix(elements: &[OpticalElement]) -> JonesMatrix {
    elements.iter().fold([[ONE, ZERO], [ZERO, ONE]], |acc, e| {
        let m = match *e {
            OpticalElement::Hwp { deg } => hwp_matrix(deg),
            OpticalElement::Qwp { deg } => qwp_matrix(deg),
            OpticalElement::Polarizer { deg } => polarizer_matrix(deg),
            _ => unreachable!("only plates are composed here"),
        };
        mat_mul(&m, &acc)
    })
}

/// Polarization vectors attached to `|+2>` and `|-2>` in a ququart state.
fn oam_columns(t: &Ququart) -> (Jones, Jones) {
    ([t[0], t[2]], [t[1], t[3]])
}

/// Whether a ququart state factorizes as polarization ⊗ OAM.
pub fn is_separable(t: &Ququart) -> bool {
    let norm: f64 = t.iter().map(|z| z.norm_sqr()).sum();
    (t[0] * t[3] - t[1] * t[2]).norm() <= 1e-12 * norm
}

/// Splits a separable state into `(polarization, OAM qubit (c₊₂, c₋₂))`.
fn factorize(t: &Ququart) -> (Jones, Jones) {
    let (plus, minus) = oam_columns(t);
    let lead = if jones_norm(&plus) >= jones_norm(&minus) { plus } else { minus };
    let n = jones_norm(&lead);
    let pol = [lead[0] / n, lead[1] / n];
    let oam = [jones_inner(&pol, &plus), jones_inner(&pol, &minus)];
    (pol, oam)
}

fn normalized(t: &Ququart) -> Result<Ququart> {
    let norm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector(None));
    }
    Ok(t.map(|z| z / norm))
}

/// Entangled-state ingredients: input polarization for the q-plate and the
/// plates that follow it.
fn entangler_parts(t: &Ququart) -> Result<(Jones, Vec<OpticalElement>)> {
    let (plus, minus) = oam_columns(t);
    let (np, nm) = (jones_norm(&plus), jones_norm(&minus));
    if (jones_inner(&plus, &minus)).norm() > 1e-9 {
        return Err(Error::UnsupportedTarget(
            "polarization states on +2 and -2 must be orthogonal".into(),
        ));
    }
    // plates after the q-plate: QWP(45°) maps L -> H and R -> V, then H -> p̂₋
    let minus_hat = if nm > 0.0 {
        [minus[0] / nm, minus[1] / nm]
    } else {
        [-plus[1].conj() / np, plus[0].conj() / np]
    };
    let mut plates = vec![OpticalElement::Qwp { deg: 45.0 }];
    plates.extend(plates_from_h(&minus_hat)?);
    let u = plates_matrix(&plates);
    let u_l = mat_vec(&u, &Polarization::L.jones());
    let u_r = mat_vec(&u, &Polarization::R.jones());
    // q-plate sends R|0> to L|-2> and L|0> to R|+2>
    let a_r = jones_inner(&u_l, &minus);
    let a_l = jones_inner(&u_r, &plus);
    Ok((from_circular(a_r, a_l), plates))
}

/// Preparation setup for a logical ququart state.
///
/// Separable targets use the probabilistic `π -> o2` transferrer (plates, q-plate,
/// PBS) followed by polarization plates; success probability 1/2. Entangled
/// targets with orthogonal polarization components use the q-plate entangler
/// followed by plates; deterministic.
pub fn preparation_setup(target: &Ququart) -> Result<SetupDescriptor> {
    let t = normalized(target)?;
    let input = InputSpec {
        pol: Polarization::H,
        oam: 0,
    };
    let mut elements = Vec::new();
    if is_separable(&t) {
        let (pol, oam) = factorize(&t);
        let (cp, cm) = (oam[0], oam[1]);
        let before_qplate = [(cp + cm) * FRAC_1_SQRT_2, I * (cp - cm) * FRAC_1_SQRT_2];
        elements.extend(plates_from_h(&before_qplate)?);
        elements.push(OpticalElement::Qplate { q: 1.0 });
        elements.push(OpticalElement::Pbs {
            port: PbsPort::TransmitH,
        });
        elements.extend(plates_from_h(&pol)?);
    } else {
        let (before_qplate, plates) = entangler_parts(&t)?;
        elements.extend(plates_from_h(&before_qplate)?);
        elements.push(OpticalElement::Qplate { q: 1.0 });
        elements.extend(plates);
    }
    Ok(SetupDescriptor { input, elements })
}

/// Analysis chain whose pass probability is `|<target|ψ>|²`.
///
/// Separable targets: plates and PBS select the polarization, the
/// deterministic `o2 -> π` transferrer moves the OAM qubit into polarization,
/// and a second plates + PBS stage selects it. Entangled targets run the
/// preparation in reverse: plates, q-plate into a single-mode fiber, plates,
/// PBS.
pub fn analysis_setup(target: &Ququart) -> Result<Vec<OpticalElement>> {
    let t = normalized(target)?;
    let transmit = OpticalElement::Pbs {
        port: PbsPort::TransmitH,
    };
    let mut elements = Vec::new();
    if is_separable(&t) {
        let (pol, oam) = factorize(&t);
        elements.extend(plates_to_h(&pol)?);
        elements.push(transmit);
        elements.push(OpticalElement::TransferO2ToPi);
        elements.extend(plates_to_h(&oam)?);
        elements.push(transmit);
    } else {
        let (before_qplate, plates) = entangler_parts(&t)?;
        for e in plates.iter().rev() {
            elements.push(match *e {
                OpticalElement::Qwp { deg } => OpticalElement::Qwp { deg: deg + 90.0 },
                other => other,
            });
        }
        elements.push(OpticalElement::QplateSmf { q: 1.0 });
        elements.extend(plates_to_h(&before_qplate)?);
        elements.push(transmit);
    }
    Ok(elements)
}
