//! Circular moiré patterns.
//!
//! The query is drawn as narrow angular sectors spanning the whole annulus.
//! The shifted references are drawn as concentric rings, ring `i` carrying
//! shift `i + 1`, so slot `j` of each shift sits at the same angle but a
//! different radius and the sectors appear curved. Overlapping the two lights
//! a full ring where a shift matches.
//!
//! Ring widths follow the equal-area recursion
//!
//! ```text
//! dr[i] = r[i-1] * dr[i-1] / (r[i-1] + dr[i-1])
//! r[i]  = r[i-1] + dr[i-1]
//! ```
//!
//! which keeps `r[i] * dr[i]` (and so the nominal cell area `r dθ dr`) fixed.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::bar::{OverlapImage, PatternImage};
use crate::codec::{code_units, encode_unit, slot_product, CodingScheme, SlotState};
use crate::error::{Error, Result};
use crate::sequence::DnaSequence;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    /// Inner radius.
    pub radius: f64,
    pub width: f64,
}

impl Ring {
    pub fn outer(&self) -> f64 {
        self.radius + self.width
    }
}

/// The first `n` rings of the equal-area recursion starting at `(r0, dr0)`.
pub fn compute_radii(r0: f64, dr0: f64, n: usize) -> Vec<Ring> {
    let mut rings = Vec::with_capacity(n);
    let (mut r, mut dr) = (r0, dr0);
    for _ in 0..n {
        rings.push(Ring {
            radius: r,
            width: dr,
        });
        let next_dr = r * dr / (r + dr);
        r += dr;
        dr = next_dr;
    }
    rings
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircularGeometry {
    r0: f64,
    dr0: f64,
    delta_theta: f64,
    rings: Vec<Ring>,
}

impl CircularGeometry {
    pub const DEFAULT_R0: f64 = 64.0;
    pub const DEFAULT_DR0: f64 = 16.0;

    pub fn new(r0: f64, dr0: f64, delta_theta: f64, ring_count: usize) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) || !(dr0 > 0.0 && dr0.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "radii must be positive, got r0={r0}, dr0={dr0}"
            )));
        }
        if !(delta_theta > 0.0 && delta_theta <= TAU) {
            return Err(Error::InvalidGeometry(format!(
                "angular slot {delta_theta} outside (0, 2π]"
            )));
        }
        if ring_count == 0 {
            return Err(Error::InvalidGeometry("no rings".into()));
        }
        Ok(Self {
            r0,
            dr0,
            delta_theta,
            rings: compute_radii(r0, dr0, ring_count),
        })
    }

    /// Default radii with the full circle split into `slots` sectors.
    pub fn with_slots(slots: usize, ring_count: usize) -> Result<Self> {
        Self::new(
            Self::DEFAULT_R0,
            Self::DEFAULT_DR0,
            TAU / slots.max(1) as f64,
            ring_count,
        )
    }

    /// Same shape with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.r0 * factor,
            self.dr0 * factor,
            self.delta_theta,
            self.rings.len(),
        )
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn dr0(&self) -> f64 {
        self.dr0
    }

    pub fn delta_theta(&self) -> f64 {
        self.delta_theta
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn ring_count(&self) -> usize {
        self.rings.len()
    }

    pub fn outer_radius(&self) -> f64 {
        self.rings.last().map_or(self.r0, Ring::outer)
    }

    /// Angular slots that fit around the circle.
    pub fn angular_capacity(&self) -> usize {
        (TAU / self.delta_theta + 1e-9).floor() as usize
    }

    /// `r dθ dr` for ring `i`, the same for every ring.
    pub fn nominal_cell_area(&self, i: usize) -> f64 {
        let ring = self.rings[i];
        ring.radius * self.delta_theta * ring.width
    }

    /// Exact area of one annular-sector cell of ring `i`.
    pub fn cell_area(&self, i: usize) -> f64 {
        let ring = self.rings[i];
        0.5 * self.delta_theta * (ring.outer().powi(2) - ring.radius.powi(2))
    }

    /// Index of the ring containing radius `rho`.
    pub fn ring_at(&self, rho: f64) -> Option<usize> {
        if rho < self.r0 || rho >= self.outer_radius() {
            return None;
        }
        let i = self.rings.partition_point(|r| r.radius <= rho);
        Some(i - 1)
    }
}

/// Raster size and sampling options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSpec {
    pub width: usize,
    pub height: usize,
    /// Angle added to every slot, radians.
    pub rotation: f64,
    /// Samples per pixel edge; 1 samples the pixel center only.
    pub supersample: u32,
}

impl Default for RasterSpec {
    fn default() -> Self {
        Self {
            width: 1024,
            height: 1024,
            rotation: 0.0,
            supersample: 1,
        }
    }
}

impl RasterSpec {
    pub fn square(size: usize) -> Self {
        Self {
            width: size,
            height: size,
            ..Self::default()
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.width as f64 / 2.0, self.height as f64 / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarKind {
    Sector,
    Curved,
}

#[derive(Debug, Clone)]
pub struct PolarPattern {
    width: usize,
    height: usize,
    pixels: Vec<SlotState>,
    geometry: CircularGeometry,
    center: (f64, f64),
    kind: PolarKind,
    scheme: CodingScheme,
    /// Non-dark slots coded in each ring.
    lit_slots: Vec<usize>,
}

impl PolarPattern {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[SlotState] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> SlotState {
        self.pixels[y * self.width + x]
    }

    pub fn geometry(&self) -> &CircularGeometry {
        &self.geometry
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn kind(&self) -> PolarKind {
        self.kind
    }

    pub fn scheme(&self) -> CodingScheme {
        self.scheme
    }

    pub fn lit_slots(&self) -> &[usize] {
        &self.lit_slots
    }

    /// The slot grid as a pattern image, one raster line per row.
    pub fn to_pattern_image(&self) -> PatternImage {
        let rows = self
            .pixels
            .chunks_exact(self.width)
            .map(<[SlotState]>::to_vec)
            .collect();
        PatternImage::from_rows_unchecked(rows, self.scheme)
    }
}

fn check_fit(geom: &CircularGeometry, raster: &RasterSpec, slots: usize) -> Result<()> {
    let capacity = geom.angular_capacity();
    if slots > capacity {
        return Err(Error::TooManySlots { slots, capacity });
    }
    let limit = raster.width.min(raster.height) as f64 / 2.0;
    if geom.outer_radius() > limit {
        return Err(Error::InvalidGeometry(format!(
            "outer radius {:.1} exceeds raster half-size {limit}",
            geom.outer_radius()
        )));
    }
    Ok(())
}

/// Samples `state_at(ring, slot)` over the raster. `ring` is `None` inside
/// `r0` and beyond the last ring.
fn rasterize<F>(geom: &CircularGeometry, raster: &RasterSpec, state_at: F) -> Vec<SlotState>
where
    F: Fn(usize, usize) -> SlotState + Sync,
{
    let (cx, cy) = raster.center();
    let ss = raster.supersample.max(1) as usize;
    let sample = |px: f64, py: f64| -> SlotState {
        let dx = px - cx;
        let dy = cy - py;
        let Some(ring) = geom.ring_at(dx.hypot(dy)) else {
            return SlotState::Dark;
        };
        let phi = (dy.atan2(dx) - raster.rotation).rem_euclid(TAU);
        let slot = (phi / geom.delta_theta()) as usize;
        state_at(ring, slot)
    };
    let mut pixels = vec![SlotState::Dark; raster.width * raster.height];
    pixels
        .par_chunks_mut(raster.width)
        .enumerate()
        .for_each(|(y, line)| {
            for (x, px) in line.iter_mut().enumerate() {
                *px = if ss == 1 {
                    sample(x as f64 + 0.5, y as f64 + 0.5)
                } else {
                    let mut counts = [0usize; 4];
                    for sy in 0..ss {
                        for sx in 0..ss {
                            let s = sample(
                                x as f64 + (sx as f64 + 0.5) / ss as f64,
                                y as f64 + (sy as f64 + 0.5) / ss as f64,
                            );
                            counts[state_rank(s)] += 1;
                        }
                    }
                    majority(&counts)
                };
            }
        });
    pixels
}

const STATES: [SlotState; 4] = [
    SlotState::Dark,
    SlotState::Bright,
    SlotState::H,
    SlotState::V,
];

fn state_rank(s: SlotState) -> usize {
    STATES.iter().position(|&t| t == s).unwrap()
}

fn majority(counts: &[usize; 4]) -> SlotState {
    let mut best = 0;
    for i in 1..4 {
        if counts[i] > counts[best] {
            best = i;
        }
    }
    STATES[best]
}

fn lit(slots: &[SlotState]) -> usize {
    slots.iter().filter(|s| !s.is_dark()).count()
}

/// Query pattern: slot `j` covers angles `[jΔθ, (j+1)Δθ)` across every ring.
pub fn render_sector_pattern(
    seq: &DnaSequence,
    geom: &CircularGeometry,
    scheme: CodingScheme,
    raster: &RasterSpec,
) -> Result<PolarPattern> {
    let row = crate::codec::encode_sequence(seq, scheme)?.into_slots();
    check_fit(geom, raster, row.len())?;
    let pixels = rasterize(geom, raster, |_, slot| {
        row.get(slot).copied().unwrap_or_default()
    });
    Ok(PolarPattern {
        width: raster.width,
        height: raster.height,
        pixels,
        geometry: geom.clone(),
        center: raster.center(),
        kind: PolarKind::Sector,
        scheme,
        lit_slots: vec![lit(&row); geom.ring_count()],
    })
}

fn render_rings(
    rows: Vec<Vec<SlotState>>,
    geom: &CircularGeometry,
    scheme: CodingScheme,
    raster: &RasterSpec,
) -> Result<PolarPattern> {
    if rows.len() > geom.ring_count() {
        return Err(Error::TooFewRings {
            needed: rows.len(),
            rings: geom.ring_count(),
        });
    }
    let slots = rows.iter().map(Vec::len).max().unwrap_or(0);
    check_fit(geom, raster, slots)?;
    let pixels = rasterize(geom, raster, |ring, slot| {
        rows.get(ring)
            .and_then(|r| r.get(slot))
            .copied()
            .unwrap_or_default()
    });
    let mut lit_slots: Vec<usize> = rows.iter().map(|r| lit(r)).collect();
    lit_slots.resize(geom.ring_count(), 0);
    Ok(PolarPattern {
        width: raster.width,
        height: raster.height,
        pixels,
        geometry: geom.clone(),
        center: raster.center(),
        kind: PolarKind::Curved,
        scheme,
        lit_slots,
    })
}

/// Ring `i` carries `seq` rotated left by `i` words, for `i < shifts`.
pub fn render_curved_pattern(
    seq: &DnaSequence,
    geom: &CircularGeometry,
    scheme: CodingScheme,
    shifts: usize,
    raster: &RasterSpec,
) -> Result<PolarPattern> {
    if seq.len() < scheme.unit_span() {
        return Err(Error::TooShort {
            scheme,
            len: seq.len(),
            min: scheme.unit_span(),
        });
    }
    let words = code_units(seq.bases(), scheme)
        .into_iter()
        .map(|u| encode_unit(u, scheme).map(|w| w.into_slots()))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..shifts)
        .map(|i| {
            let k = i % words.len();
            words[k..]
                .iter()
                .chain(&words[..k])
                .flatten()
                .copied()
                .collect()
        })
        .collect();
    render_rings(rows, geom, scheme, raster)
}

/// Ring `i` carries row `i` of a shift stack.
pub fn render_curved_stack(
    stack: &PatternImage,
    geom: &CircularGeometry,
    raster: &RasterSpec,
) -> Result<PolarPattern> {
    let rows = (0..stack.rows()).map(|r| stack.row(r).to_vec()).collect();
    render_rings(rows, geom, stack.scheme(), raster)
}

/// Pixel-wise overlap of two polar patterns.
#[derive(Debug, Clone)]
pub struct PolarOverlap {
    pub image: OverlapImage,
    pub geometry: CircularGeometry,
    pub center: (f64, f64),
    /// Analytic intensity of each ring at full correlation.
    pub ideal_energy: Vec<f64>,
}

pub fn overlap_circular(a: &PolarPattern, b: &PolarPattern) -> Result<PolarOverlap> {
    if (a.width, a.height) != (b.width, b.height)
        || a.center != b.center
        || a.scheme != b.scheme
        || a.geometry != b.geometry
    {
        return Err(Error::DimensionMismatch {
            left: (a.height, a.width),
            right: (b.height, b.width),
        });
    }
    let data = a
        .pixels
        .par_iter()
        .zip(&b.pixels)
        .map(|(&p, &q)| slot_product(p, q))
        .collect();
    let ideal_energy = (0..a.geometry.ring_count())
        .map(|i| a.lit_slots[i].min(b.lit_slots[i]) as f64 * a.geometry.cell_area(i))
        .collect();
    Ok(PolarOverlap {
        image: OverlapImage::new(a.height, a.width, data, a.scheme),
        geometry: a.geometry.clone(),
        center: a.center,
        ideal_energy,
    })
}

impl PolarOverlap {
    /// Summed intensity over each ring.
    pub fn ring_sums(&self) -> Vec<u64> {
        let (cx, cy) = self.center;
        let w = self.image.cols();
        let mut sums = vec![0u64; self.geometry.ring_count()];
        for (idx, &v) in self.image.data().iter().enumerate() {
            if v == 0 {
                continue;
            }
            let dx = (idx % w) as f64 + 0.5 - cx;
            let dy = cy - ((idx / w) as f64 + 0.5);
            if let Some(ring) = self.geometry.ring_at(dx.hypot(dy)) {
                sums[ring] += u64::from(v);
            }
        }
        sums
    }

    /// Ring intensities divided by their full-match energy.
    pub fn ring_energies(&self) -> Vec<f64> {
        self.ring_sums()
            .iter()
            .zip(&self.ideal_energy)
            .map(|(&s, &ideal)| if ideal > 0.0 { s as f64 / ideal } else { 0.0 })
            .collect()
    }
}

/// 0-based indices of rings whose normalized energy reaches `threshold`.
///
/// A threshold of 0 returns every ring.
pub fn detect_ring(img: &PolarOverlap, threshold: f64) -> Vec<usize> {
    img.ring_energies()
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e >= threshold)
        .map(|(i, _)| i)
        .collect()
}

/// Outputs of [`circular_align`].
#[derive(Debug, Clone)]
pub struct CircularAlignment {
    pub stack: PolarPattern,
    pub query: PolarPattern,
    pub overlap: PolarOverlap,
    pub energies: Vec<f64>,
    /// 0-based ring with the highest normalized energy; ring `i` is shift
    /// row `i + 1`.
    pub best_ring: usize,
}

/// Circular counterpart of the bar pipeline: the shift stack of `reference`
/// is drawn as rings, `query` as sectors spanning all rings.
pub fn circular_align(
    reference: &DnaSequence,
    query: &DnaSequence,
    scheme: CodingScheme,
    r0: f64,
    dr0: f64,
    raster: &RasterSpec,
) -> Result<CircularAlignment> {
    let (n, m) = (reference.len(), query.len());
    if m > n {
        return Err(Error::WindowTooLarge {
            window: m,
            shifts: 1,
            reference: n,
        });
    }
    let shifts = n - m + 1;
    let stack = crate::bar::build_shift_stack(reference, m, scheme, shifts)?;
    let slots = stack.cols();
    let geom = CircularGeometry::new(r0, dr0, TAU / slots as f64, shifts)?;
    let stack = render_curved_stack(&stack, &geom, raster)?;
    let query = render_sector_pattern(query, &geom, scheme, raster)?;
    let overlap = overlap_circular(&query, &stack)?;
    let energies = overlap.ring_energies();
    let best_ring = energies
        .iter()
        .enumerate()
        .fold(0, |best, (i, &e)| if e > energies[best] { i } else { best });
    Ok(CircularAlignment {
        stack,
        query,
        overlap,
        energies,
        best_ring,
    })
}
