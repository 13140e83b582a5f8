//! Intersection numbers of divisor curves via zero-dimensional Gröbner
//! computations on affine charts of P(1,1,1,3).
//!
//! On the surface the curve {q = 0, w = g} meets {q' = 0, w = g'} in the
//! scheme cut out by (q, q', g − g') in P², so each intersection number is
//! the length of a zero-dimensional scheme in the plane.  The plane is split
//! into strata {x ≠ 0}, {x = 0, y ≠ 0}, {x = y = 0}; the length supported on
//! a stratum is read off in the chart of its nonvanishing coordinate, after
//! localizing by adding a high power of the remaining vanishing coordinates.

use std::fs;
use std::path::{Path, PathBuf};

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{EmbedCtx, Field, Fq};
use crate::poly::{groebner, zerodim_degree, MPoly, Mono, PolyRing, ZeroDim};
use crate::surface::{DivisorCurve, EmbeddedCurve};

/// Chart order: coordinate indices by priority.
pub const XYZ: [usize; 3] = [0, 1, 2];
pub const ZYX: [usize; 3] = [2, 1, 0];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRecord {
    pub labels: (String, String),
    pub value: i64,
    /// Lengths on the three strata; empty for self-intersections.
    pub charts: Vec<usize>,
    pub key: String,
}

/// Sets coordinate `k` to 1 and renumbers the other two as variables 0, 1.
fn dehomogenize<F: Field>(r2: &PolyRing<F>, p: &MPoly<F::Elem>, rest: [usize; 2]) -> MPoly<F::Elem> {
    let terms = p.terms.iter().map(|(m, c)| (Mono::from_exps(&[m.exp(rest[0]), m.exp(rest[1])]), c.clone())).collect();
    r2.from_terms(terms)
}

fn degree_of<F: Field>(ring: &PolyRing<F>, gens: &[MPoly<F::Elem>], what: &str) -> Result<usize> {
    let gens: Vec<MPoly<F::Elem>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Err(Error::CommonComponent(what.into(), "empty ideal".into()));
    }
    match zerodim_degree(ring, &groebner(ring, &gens)) {
        ZeroDim::Degree(d) => Ok(d),
        ZeroDim::NotZeroDimensional => Err(Error::CommonComponent(what.into(), "positive-dimensional".into())),
    }
}

/// Length of the plane scheme cut out by homogeneous `gens`, split over the
/// three strata for the given coordinate priority.
pub fn stratified_degree<F: Field>(field: &F, gens: &[MPoly<F::Elem>], order: [usize; 3]) -> Result<[usize; 3]> {
    let r2 = PolyRing::grevlex(field.clone(), 2);
    let one = field.one();
    let [a, b, c] = order;
    let sorted = |u: usize, v: usize| if u < v { [u, v] } else { [v, u] };
    // stratum a ≠ 0
    let rest = sorted(b, c);
    let i1: Vec<MPoly<F::Elem>> = gens.iter().map(|g| dehomogenize(&r2, g, rest)).collect();
    let d1 = degree_of(&r2, &i1, "chart 1")?;
    // stratum a = 0, b ≠ 0: chart b = 1, localize at a = 0
    let rest = sorted(a, c);
    let ia = rest.iter().position(|&v| v == a).unwrap();
    let i2: Vec<MPoly<F::Elem>> = gens.iter().map(|g| dehomogenize(&r2, g, rest)).collect();
    let n2 = degree_of(&r2, &i2, "chart 2")?;
    let d2 = if n2 == 0 {
        0
    } else {
        let mut g2 = i2.clone();
        g2.push(r2.monomial(Mono::var(ia, n2 as u32), one.clone()));
        degree_of(&r2, &g2, "chart 2 stratum")?
    };
    // stratum a = b = 0: chart c = 1, localize at (a, b)
    let rest = sorted(a, b);
    let i3: Vec<MPoly<F::Elem>> = gens.iter().map(|g| dehomogenize(&r2, g, rest)).collect();
    let n3 = degree_of(&r2, &i3, "chart 3")?;
    let d3 = if n3 == 0 {
        0
    } else {
        let mut g3 = i3.clone();
        for k in 0..=n3 as u32 {
            g3.push(r2.monomial(Mono::from_exps(&[k, n3 as u32 - k]), one.clone()));
        }
        degree_of(&r2, &g3, "chart 3 stratum")?
    };
    Ok([d1, d2, d3])
}

/// Generators of the intersection scheme of two distinct curves.
fn pair_ideal(fq: &Fq, a: &EmbeddedCurve, b: &EmbeddedCurve) -> Vec<MPoly<u32>> {
    let r3 = PolyRing::grevlex(fq.clone(), 3);
    vec![a.q.clone(), b.q.clone(), r3.sub(&a.g, &b.g)]
}

/// Intersection number of two embedded curves, with the per-stratum
/// breakdown (`None` breakdown for D = D′, whose value is −2).
pub fn intersection_number_embedded(fq: &Fq, a: &EmbeddedCurve, b: &EmbeddedCurve, order: [usize; 3]) -> Result<(i64, Option<[usize; 3]>)> {
    if a.same_curve(b) {
        return Ok((-2, None));
    }
    let s = stratified_degree(fq, &pair_ideal(fq, a, b), order)
        .map_err(|_| Error::CommonComponent(a.label.clone(), b.label.clone()))?;
    Ok(((s[0] + s[1] + s[2]) as i64, Some(s)))
}

/// Intersection number of two curves on the reduction given by `ctx`.
pub fn intersection_number(d1: &DivisorCurve, d2: &DivisorCurve, ctx: &EmbedCtx) -> Result<i64> {
    let a = d1.embed(ctx)?;
    let b = d2.embed(ctx)?;
    if a.same_curve(&b) {
        return if d1.same_curve(d2) {
            Ok(-2)
        } else {
            Err(Error::VerificationFailed(format!("{} and {} collide mod p", d1.label, d2.label)))
        };
    }
    Ok(intersection_number_embedded(&ctx.fq, &a, &b, XYZ)?.0)
}

/// Equality of curves: embedded canonical forms agree and the symbolic
/// canonical forms agree.
pub fn divisor_equal(d1: &DivisorCurve, d2: &DivisorCurve, ctx: &EmbedCtx) -> Result<bool> {
    let a = d1.embed(ctx)?;
    let b = d2.embed(ctx)?;
    Ok(a.same_curve(&b) && d1.same_curve(d2))
}

/// Degree of a curve against the pullback of a line, computed with a fixed
/// pseudo-random line.
pub fn intersection_with_hyperplane(d: &EmbeddedCurve, fq: &Fq, seed: u64) -> Result<i64> {
    let r3 = PolyRing::grevlex(fq.clone(), 3);
    let q = fq.order() as u64;
    // small LCG for reproducible coefficients
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        fq.from_index(((s >> 33) % q) as u32)
    };
    let line = r3.from_terms((0..3).map(|i| (Mono::var(i, 1), next())).collect());
    if line.is_zero() {
        return Err(Error::Degenerate);
    }
    let s = stratified_degree(fq, &[d.q.clone(), line], XYZ)?;
    Ok((s[0] + s[1] + s[2]) as i64)
}

/// Cache parameters identifying a reduction.
#[derive(Clone, Debug, Serialize)]
struct CacheKey<'a> {
    labels: (&'a str, &'a str),
    t0: String,
    p: u64,
    m: u32,
    modulus: &'a [u64],
    images: [u32; 5],
}

/// Disk cache of intersection records, one JSON file per pair.
#[derive(Clone, Debug)]
pub struct IntersectionCache {
    dir: Option<PathBuf>,
}

impl IntersectionCache {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)?;
        }
        Ok(IntersectionCache { dir: dir.map(Path::to_path_buf) })
    }

    pub fn disabled() -> Self {
        IntersectionCache { dir: None }
    }

    fn key(ctx: &EmbedCtx, a: &str, b: &str) -> String {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let k = CacheKey {
            labels: (a, b),
            t0: ctx.emb.t0.to_string(),
            p: ctx.emb.field.p,
            m: ctx.emb.field.m,
            modulus: &ctx.emb.field.modulus,
            images: ctx.emb.images,
        };
        serde_json::to_string(&k).expect("serializable key")
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let h = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.as_ref().map(|d| d.join(format!("{h}.json")))
    }

    fn load(&self, key: &str) -> Option<IntersectionRecord> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<IntersectionRecord>(&text) {
            Ok(r) if r.key == key => Some(r),
            _ => {
                warn!("ignoring corrupt cache entry {}", path.display());
                None
            }
        }
    }

    fn store(&self, rec: &IntersectionRecord) {
        if let Some(path) = self.path(&rec.key) {
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            let ok = serde_json::to_vec_pretty(rec)
                .ok()
                .and_then(|bytes| fs::write(&tmp, bytes).ok())
                .and_then(|_| fs::rename(&tmp, &path).ok());
            if ok.is_none() {
                warn!("could not write cache entry {}", path.display());
            }
        }
    }

    /// Cached intersection record for a pair of embedded curves.
    pub fn record(&self, ctx: &EmbedCtx, a: &EmbeddedCurve, b: &EmbeddedCurve) -> Result<IntersectionRecord> {
        let key = Self::key(ctx, &a.label, &b.label);
        if let Some(r) = self.load(&key) {
            return Ok(r);
        }
        let (value, charts) = intersection_number_embedded(&ctx.fq, a, b, XYZ)?;
        let rec = IntersectionRecord {
            labels: (a.label.clone(), b.label.clone()),
            value,
            charts: charts.map(|c| c.to_vec()).unwrap_or_default(),
            key,
        };
        self.store(&rec);
        Ok(rec)
    }
}

/// Symmetric matrix of pairwise intersection numbers, computed in parallel.
pub fn intersection_matrix(curves: &[EmbeddedCurve], ctx: &EmbedCtx, cache: &IntersectionCache) -> Result<Vec<Vec<i64>>> {
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    debug!("computing {} intersection numbers", pairs.len());
    let vals: Vec<Result<i64>> = pairs
        .par_iter()
        .map(|&(i, j)| cache.record(ctx, &curves[i], &curves[j]).map(|r| r.value))
        .collect();
    let mut m = vec![vec![0i64; n]; n];
    for (&(i, j), v) in pairs.iter().zip(vals) {
        let v = v?;
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

/// Intersection numbers of each curve in `rows` with each curve in `cols`.
pub fn intersection_block(
    rows: &[EmbeddedCurve],
    cols: &[EmbeddedCurve],
    ctx: &EmbedCtx,
    cache: &IntersectionCache,
) -> Result<Vec<Vec<i64>>> {
    rows.par_iter()
        .map(|a| cols.iter().map(|b| cache.record(ctx, a, b).map(|r| r.value)).collect::<Result<Vec<i64>>>())
        .collect()
}
