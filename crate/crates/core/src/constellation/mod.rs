//! Symbol alphabets and the bit-pattern to symbol structure.
//!
//! A [`Constellation`] is defined by a total map from the `2^N` bit patterns to
//! a set of `M <= 2^N` distinct points. When `M < 2^N` several patterns share a
//! point and the constellation is non-bijective. For every bit position `n`
//! and value `b` the constellation keeps the subset of points reachable with
//! `b_n = b`; for non-bijective alphabets the two subsets of a position can
//! overlap.

mod aggregate;
mod format;
mod priors;

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use aggregate::{AggregationMethod, PriorAggregate};
pub use format::{FORMAT_NAME, FORMAT_VERSION};
pub use priors::BitPriorSet;

/// Largest supported number of bits per symbol.
pub const MAX_BITS: usize = 20;

/// Two points closer than this in both coordinates are the same symbol.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// An ordered sequence of `N` bits, `b_0` stored in the least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitPattern {
    value: u64,
    len: usize,
}

impl BitPattern {
    pub fn new(bits: &[u8]) -> Result<Self> {
        if bits.len() > 64 {
            return Err(Error::LengthMismatch {
                expected: 64,
                got: bits.len(),
            });
        }
        let mut value = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => value |= 1 << i,
                other => return Err(Error::BitValue(other)),
            }
        }
        Ok(Self {
            value,
            len: bits.len(),
        })
    }

    /// Pattern whose bit `i` is bit `i` of `value`.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self {
            value: value & mask,
            len,
        }
    }

    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.value >> i) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }
}

/// A point of the alphabet together with the number of bit patterns mapping
/// onto it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstellationPoint {
    pub value: Complex64,
    pub index: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstellationKind {
    Bijective,
    NonBijective,
}

/// Reference bijective schemes, all Gray labelled with unit average energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BijectiveScheme {
    Bpsk,
    Qpsk,
    Psk8,
    Qam16Gray,
}

/// Layers of a superposition constellation that share a chip direction.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LayerGroup {
    pub(crate) layers: Vec<usize>,
}

/// A symbol alphabet with its bit labelling.
#[derive(Debug, Clone)]
pub struct Constellation {
    name: String,
    n_bits: usize,
    points: Vec<ConstellationPoint>,
    mapper: Vec<u32>,
    subsets: Vec<[Vec<usize>; 2]>,
    kind: ConstellationKind,
    layers: Option<Vec<Complex64>>,
    layer_groups: Vec<LayerGroup>,
    lookup: HashMap<(i64, i64), usize>,
}

fn quantize(z: Complex64) -> (i64, i64) {
    (
        (z.re / POINT_TOLERANCE).round() as i64,
        (z.im / POINT_TOLERANCE).round() as i64,
    )
}

/// Gray code of `k`.
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

impl Constellation {
    /// Direct superposition modulation with equal power allocation.
    ///
    /// Bits `0..N/2` each add a chip `±a` to the real part, bits `N/2..N` each
    /// add `±a` to the imaginary part, with `a = 1/sqrt(N)` and `b = 0 -> +a`.
    /// The result has `N²/4 + N + 1` points.
    pub fn dsm_epa(n_bits: usize) -> Result<Self> {
        if n_bits == 0 || !n_bits.is_multiple_of(2) {
            return Err(Error::InvalidConstellation(format!(
                "DSM-EPA needs a positive even number of bits, got {n_bits}"
            )));
        }
        if n_bits > MAX_BITS {
            return Err(Error::InvalidConstellation(format!(
                "at most {MAX_BITS} bits supported, got {n_bits}"
            )));
        }
        let a = 1.0 / (n_bits as f64).sqrt();
        let half = n_bits / 2;
        let layers = (0..n_bits)
            .map(|i| {
                if i < half {
                    Complex64::new(a, 0.0)
                } else {
                    Complex64::new(0.0, a)
                }
            })
            .collect();
        Self::superposition(format!("dsm-epa:{n_bits}"), layers)
    }

    /// Superposition of binary chips: bit `i` contributes `+c_i` when 0 and
    /// `-c_i` when 1. No energy normalization is applied.
    pub fn superposition(name: impl Into<String>, layers: Vec<Complex64>) -> Result<Self> {
        let n_bits = layers.len();
        if n_bits == 0 || n_bits > MAX_BITS {
            return Err(Error::InvalidConstellation(format!(
                "superposition needs 1..={MAX_BITS} layers, got {n_bits}"
            )));
        }
        if layers.iter().any(|c| c.norm() <= POINT_TOLERANCE || !c.is_finite()) {
            return Err(Error::InvalidConstellation("zero or non-finite chip amplitude".into()));
        }
        let chips = layers.clone();
        let mut c = Self::from_labelling(name.into(), n_bits, |p| {
            chips
                .iter()
                .enumerate()
                .map(|(i, &chip)| if (p >> i) & 1 == 0 { chip } else { -chip })
                .sum()
        })?;
        c.layer_groups = group_layers(&layers);
        c.layers = Some(layers);
        Ok(c)
    }

    /// One of the reference bijective constellations.
    pub fn bijective(scheme: BijectiveScheme) -> Self {
        let c = match scheme {
            BijectiveScheme::Bpsk => Self::from_labelling("bpsk".into(), 1, |p| {
                Complex64::new(if p & 1 == 0 { 1.0 } else { -1.0 }, 0.0)
            }),
            BijectiveScheme::Qpsk => Self::from_labelling("qpsk".into(), 2, |p| {
                let re = if p & 1 == 0 { 1.0 } else { -1.0 };
                let im = if p & 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(re, im) * FRAC_1_SQRT_2
            }),
            BijectiveScheme::Psk8 => {
                // label gray(k) sits at angle 2πk/8
                let mut position = [0u64; 8];
                for k in 0..8 {
                    position[gray(k) as usize] = k;
                }
                Self::from_labelling("psk8".into(), 3, move |p| {
                    Complex64::from_polar(1.0, 2.0 * PI * position[p as usize] as f64 / 8.0)
                })
            }
            BijectiveScheme::Qam16Gray => {
                // per quadrature: first bit is the sign, second selects inner/outer
                let level = |sign: u64, inner: u64| -> f64 {
                    let mag = if inner == 1 { 1.0 } else { 3.0 };
                    if sign == 0 {
                        mag
                    } else {
                        -mag
                    }
                };
                let scale = 1.0 / 10f64.sqrt();
                Self::from_labelling("qam16".into(), 4, move |p| {
                    Complex64::new(level(p & 1, (p >> 1) & 1), level((p >> 2) & 1, (p >> 3) & 1)) * scale
                })
            }
        };
        c.expect("reference constellations are valid")
    }

    /// Builds a constellation from a labelling function over pattern indices.
    /// Points are numbered in order of first appearance.
    fn from_labelling(name: String, n_bits: usize, label: impl Fn(u64) -> Complex64) -> Result<Self> {
        let size = 1u64 << n_bits;
        let mut points: Vec<ConstellationPoint> = Vec::new();
        let mut lookup: HashMap<(i64, i64), usize> = HashMap::new();
        let mut mapper = Vec::with_capacity(size as usize);
        for p in 0..size {
            let z = label(p);
            if !z.is_finite() {
                return Err(Error::InvalidConstellation("non-finite symbol".into()));
            }
            let idx = match find_in(&lookup, &points, z) {
                Some(idx) => idx,
                None => {
                    let idx = points.len();
                    points.push(ConstellationPoint {
                        value: z,
                        index: idx,
                        multiplicity: 0,
                    });
                    lookup.insert(quantize(z), idx);
                    idx
                }
            };
            points[idx].multiplicity += 1;
            mapper.push(idx as u32);
        }
        Self::assemble(name, n_bits, points, mapper, None, lookup)
    }

    fn assemble(
        name: String,
        n_bits: usize,
        points: Vec<ConstellationPoint>,
        mapper: Vec<u32>,
        layers: Option<Vec<Complex64>>,
        lookup: HashMap<(i64, i64), usize>,
    ) -> Result<Self> {
        let m = points.len();
        let mut reach = vec![[vec![false; m], vec![false; m]]; n_bits];
        for (p, &idx) in mapper.iter().enumerate() {
            for (n, r) in reach.iter_mut().enumerate() {
                r[(p >> n) & 1][idx as usize] = true;
            }
        }
        let subsets = reach
            .into_iter()
            .map(|[r0, r1]| {
                let collect = |r: Vec<bool>| r.into_iter().enumerate().filter(|x| x.1).map(|x| x.0).collect();
                [collect(r0), collect(r1)]
            })
            .collect();
        let kind = if m == mapper.len() {
            ConstellationKind::Bijective
        } else {
            ConstellationKind::NonBijective
        };
        let layer_groups = layers.as_deref().map(group_layers).unwrap_or_default();
        Ok(Self {
            name,
            n_bits,
            points,
            mapper,
            subsets,
            kind,
            layers,
            layer_groups,
            lookup,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Bits per symbol, `N`.
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// The alphabet `X`.
    pub fn points(&self) -> &[ConstellationPoint] {
        &self.points
    }

    /// Alphabet size `M`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn is_bijective(&self) -> bool {
        self.kind == ConstellationKind::Bijective
    }

    /// Per-layer chip amplitudes, present for superposition constellations.
    pub fn layers(&self) -> Option<&[Complex64]> {
        self.layers.as_deref()
    }

    pub(crate) fn layer_groups(&self) -> &[LayerGroup] {
        &self.layer_groups
    }

    /// Point index for every pattern index, `2^N` entries.
    pub fn mapper(&self) -> &[u32] {
        &self.mapper
    }

    /// Point index reached by the pattern with index `pattern`.
    #[inline]
    pub fn point_index(&self, pattern: u64) -> usize {
        self.mapper[pattern as usize] as usize
    }

    pub fn map_bits(&self, bits: &BitPattern) -> Result<&ConstellationPoint> {
        if bits.len() != self.n_bits {
            return Err(Error::LengthMismatch {
                expected: self.n_bits,
                got: bits.len(),
            });
        }
        Ok(&self.points[self.point_index(bits.index())])
    }

    /// Indices of the points reachable with `b_n = b`, in increasing order.
    pub fn subset(&self, n: usize, b: u8) -> Result<&[usize]> {
        if n >= self.n_bits {
            return Err(Error::BitIndex {
                index: n,
                n_bits: self.n_bits,
            });
        }
        if b > 1 {
            return Err(Error::BitValue(b));
        }
        Ok(&self.subsets[n][b as usize])
    }

    #[inline]
    pub(crate) fn subsets_unchecked(&self, n: usize, b: usize) -> &[usize] {
        &self.subsets[n][b]
    }

    /// Index of the point at `z`, if any lies within [`POINT_TOLERANCE`].
    pub fn find_point(&self, z: Complex64) -> Option<usize> {
        find_in(&self.lookup, &self.points, z)
    }

    /// Average symbol energy with every bit pattern equally likely.
    pub fn average_energy(&self) -> f64 {
        let total: f64 = self
            .points
            .iter()
            .map(|p| p.multiplicity as f64 * p.value.norm_sqr())
            .sum();
        total / self.mapper.len() as f64
    }
}

fn find_in(lookup: &HashMap<(i64, i64), usize>, points: &[ConstellationPoint], z: Complex64) -> Option<usize> {
    let (kr, ki) = quantize(z);
    // the exact cell first, then its neighbours
    const OFFSETS: [(i64, i64); 9] = [(0, 0), (-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];
    OFFSETS.iter().find_map(|&(dr, di)| {
        let idx = *lookup.get(&(kr + dr, ki + di))?;
        let d = points[idx].value - z;
        (d.re.abs() < POINT_TOLERANCE && d.im.abs() < POINT_TOLERANCE).then_some(idx)
    })
}

/// Partitions layers into groups of collinear chips.
fn group_layers(layers: &[Complex64]) -> Vec<LayerGroup> {
    let mut dirs: Vec<Complex64> = Vec::new();
    let mut groups: Vec<LayerGroup> = Vec::new();
    for (i, c) in layers.iter().enumerate() {
        let mut u = c / c.norm();
        // fold onto the half-plane so that c and -c share a direction
        if u.im < -POINT_TOLERANCE || (u.im.abs() <= POINT_TOLERANCE && u.re < 0.0) {
            u = -u;
        }
        match dirs.iter().position(|d| (d - u).norm() < POINT_TOLERANCE) {
            Some(g) => groups[g].layers.push(i),
            None => {
                dirs.push(u);
                groups.push(LayerGroup { layers: vec![i] });
            }
        }
    }
    groups
}
