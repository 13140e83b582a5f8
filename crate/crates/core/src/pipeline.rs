//! Stage orchestration shared by the command-line tool and the tests.

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{embedding_at, ff_make, is_bad_prime, is_prime, rat, EmbedCtx, Embedding, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use crate::indexcheck::{self, Certificate, Curve};
use crate::intersect::{intersection_matrix, IntersectionCache};
use crate::latbuild::{
    apply, class_of_divisor, generator_isometries, hyperplane_class, quotient_by_radical, verify_galois_images, IsometryRep,
    LatticeBundle, OrbitLattice,
};
use crate::surface::{divisor_catalog, h_generators, orbit_generate, parse_word, Atom, Orbit};

pub const PICARD_RANK: usize = 19;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupMode {
    Normal,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Catalog,
    Orbit,
    Gram,
    Lattice,
    Nikulin,
    Index,
    Galois,
    Cohomology,
    Fibers,
    Tritangent,
    Inose,
}

impl Stage {
    pub const ALL: [Stage; 11] = [
        Stage::Catalog,
        Stage::Orbit,
        Stage::Gram,
        Stage::Lattice,
        Stage::Nikulin,
        Stage::Index,
        Stage::Galois,
        Stage::Cohomology,
        Stage::Fibers,
        Stage::Tritangent,
        Stage::Inose,
    ];

    pub fn parse(s: &str) -> Result<Stage> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s || (s == "index-check" && *st == Stage::Index))
            .ok_or_else(|| Error::Config(format!("unknown stage '{s}'")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Catalog => "catalog",
            Stage::Orbit => "orbit",
            Stage::Gram => "gram",
            Stage::Lattice => "lattice",
            Stage::Nikulin => "nikulin",
            Stage::Index => "index",
            Stage::Galois => "galois",
            Stage::Cohomology => "cohomology",
            Stage::Fibers => "fibers",
            Stage::Tritangent => "tritangent",
            Stage::Inose => "inose",
        }
    }

    /// Whether the stage needs the lattice of the orbit.
    pub fn needs_lattice(&self) -> bool {
        matches!(self, Stage::Gram | Stage::Lattice | Stage::Nikulin | Stage::Index | Stage::Galois | Stage::Cohomology)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub t0: Rat,
    pub p: u64,
    pub m: u32,
    pub cache_dir: Option<PathBuf>,
    pub second_prime: Option<u64>,
    pub subgroup_mode: SubgroupMode,
    pub stages: Vec<Stage>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t0: rat(7, 1),
            p: 79,
            m: 2,
            cache_dir: None,
            second_prime: None,
            subgroup_mode: SubgroupMode::Normal,
            stages: Stage::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    /// Conditions every stage needs: p prime, p > 3, t0 integral at p.
    pub fn validate_field(&self) -> Result<()> {
        if !is_prime(self.p) || self.p <= 3 || self.m == 0 {
            return Err(Error::Config(format!("F_{{{}^{}}} is not a usable field", self.p, self.m)));
        }
        if (self.t0.denom() % BigInt::from(self.p)).is_zero() {
            return Err(Error::Config(format!("t0 = {} has p = {} in its denominator", self.t0, self.p)));
        }
        Ok(())
    }

    /// Conditions for building the lattice: additionally the fiber over t0
    /// has good reduction at p.
    pub fn validate(&self) -> Result<()> {
        self.validate_field()?;
        if is_bad_prime(&self.t0, self.p) {
            return Err(Error::Config(format!("p = {} is bad for t0 = {}", self.p, self.t0)));
        }
        if let Some(q) = self.second_prime {
            if q == self.p || is_bad_prime(&self.t0, q) {
                return Err(Error::Config(format!("second prime {q} is unusable")));
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("expected key = value: '{line}'")))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |_| Error::Config(format!("bad value for {k}: '{v}'"));
            match k {
                "t0" => c.t0 = parse_rat(v)?,
                "p" => c.p = v.parse().map_err(bad)?,
                "m" => c.m = v.parse().map_err(bad)?,
                "cache_dir" => c.cache_dir = Some(PathBuf::from(v)),
                "second_prime" => c.second_prime = Some(v.parse().map_err(bad)?),
                "subgroup_mode" => c.subgroup_mode = parse_mode(v)?,
                "stages" => c.stages = v.split(',').map(|s| Stage::parse(s.trim())).collect::<Result<_>>()?,
                _ => return Err(Error::Config(format!("unknown key '{k}'"))),
            }
        }
        Ok(c)
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|_| Error::Config(format!("not a rational number: '{s}'")))
}

pub fn parse_mode(s: &str) -> Result<SubgroupMode> {
    match s {
        "normal" => Ok(SubgroupMode::Normal),
        "all" => Ok(SubgroupMode::All),
        _ => Err(Error::Config(format!("subgroup mode must be normal or all, not '{s}'"))),
    }
}

pub fn embedding_for(t0: &Rat, p: u64, m: u32) -> Result<Embedding> {
    let desc = ff_make(p, m)?;
    embedding_at(t0, &desc)?.ok_or_else(|| Error::Config(format!("no embedding of L into {desc} with t ↦ {t0}")))
}

/// The orbit H·Ω, its lattice and the symmetry generators.
pub struct LatticeBuild {
    pub ctx: EmbedCtx,
    pub orbit: Orbit,
    pub lattice: OrbitLattice,
    pub hyperplane: Vec<i64>,
    pub h_gens: Vec<IsometryRep>,
    pub gal_gens: Vec<IsometryRep>,
    pub timings: Vec<(String, f64)>,
}

pub fn build_orbit(ctx: &EmbedCtx) -> Result<Orbit> {
    let gens: Vec<Atom> = h_generators().into_iter().map(Atom::Psi).collect();
    orbit_generate(&divisor_catalog(), &gens, ctx)
}

pub fn build_lattice(cfg: &RunConfig) -> Result<LatticeBuild> {
    cfg.validate()?;
    let mut timings = vec![];
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Vec<(String, f64)>| {
        timings.push((name.to_string(), clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };
    let ctx = embedding_for(&cfg.t0, cfg.p, cfg.m)?.context()?;
    let orbit = build_orbit(&ctx)?;
    lap("orbit", &mut timings);
    info!("orbit of {} curves", orbit.len());
    let cache = IntersectionCache::new(cfg.cache_dir.as_deref())?;
    let m = intersection_matrix(&orbit.embedded, &ctx, &cache)?;
    lap("intersections", &mut timings);
    let lattice = quotient_by_radical(orbit.labels(), m, PICARD_RANK)?;
    let hyperplane = hyperplane_class(&lattice)?;
    let (h_gens, gal_gens) = generator_isometries(&lattice, &orbit, &ctx)?;
    for (k, rep) in gal_gens.iter().enumerate() {
        verify_galois_images(k + 1, rep, &lattice, &orbit, &ctx)?;
    }
    for g in h_gens.iter().chain(&gal_gens) {
        if apply(&g.matrix, &hyperplane) != hyperplane {
            return Err(Error::VerificationFailed(format!("{} moves the hyperplane class", g.name)));
        }
    }
    lap("isometries", &mut timings);
    Ok(LatticeBuild { ctx, orbit, lattice, hyperplane, h_gens, gal_gens, timings })
}

impl LatticeBuild {
    pub fn all_gens(&self) -> Vec<IsometryRep> {
        self.h_gens.iter().chain(&self.gal_gens).cloned().collect()
    }

    pub fn bundle(&self) -> LatticeBundle {
        LatticeBundle {
            embedding: self.ctx.emb.clone(),
            lattice: self.lattice.clone(),
            hyperplane: self.hyperplane.clone(),
            h_generators: self.h_gens.clone(),
            galois_generators: self.gal_gens.clone(),
        }
    }

    /// Class of the curve named by a word such as `tau2^2*psi(x,y)*B4`,
    /// computed from the curve itself.
    pub fn class_of_word(&self, word: &str) -> Result<Curve> {
        let (aut, base) = parse_word(word)?;
        let base = base.ok_or_else(|| Error::Config(format!("'{word}' names no curve")))?;
        let curve = aut.apply(&divisor_catalog()[base]);
        if !curve.is_bitangent() {
            return Err(Error::VerificationFailed(format!("{word} is not bitangent")));
        }
        let class = class_of_divisor(&curve, &self.lattice, &self.orbit, &self.ctx)?;
        Ok(Curve { label: word.to_string(), class })
    }

    /// The classes of G·Ω, each labeled by a word.
    pub fn curve_pool(&self) -> Vec<Curve> {
        let gens = self.all_gens();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut pool: Vec<Curve> = vec![];
        let mut queue = VecDeque::new();
        for (label, c) in self.lattice.labels.iter().zip(&self.lattice.coords) {
            if seen.insert(c.clone(), pool.len()).is_none() {
                queue.push_back(pool.len());
                pool.push(Curve { label: label.clone(), class: c.clone() });
            }
        }
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let c = apply(&g.matrix, &pool[i].class);
                if !seen.contains_key(&c) {
                    seen.insert(c.clone(), pool.len());
                    queue.push_back(pool.len());
                    let label = format!("{}*{}", g.name, pool[i].label);
                    pool.push(Curve { label, class: c });
                }
            }
        }
        pool
    }

    /// Witness pairs built from ψ_{0,3,0} and τ₂²ψ_(x,y), tried first.
    pub fn preferred_pairs(&self) -> Result<Vec<(Curve, Curve)>> {
        let mut out = vec![];
        for (a, b) in [
            ("psi(0,3,0)*B3", "B3"),
            ("psi(0,3,0)*B4", "B4"),
            ("tau2^2*psi(x,y)*psi(0,3,0)*B4", "tau2^2*psi(x,y)*B4"),
        ] {
            out.push((self.class_of_word(a)?, self.class_of_word(b)?));
        }
        Ok(out)
    }

    pub fn index_certificate(&self) -> Result<Certificate> {
        let preferred = self.preferred_pairs()?;
        let pool = self.curve_pool();
        let mut notes = vec![];
        for (a, b) in &preferred {
            let e: Vec<u8> = a.class.iter().zip(&b.class).map(|(x, y)| (x - y).rem_euclid(2) as u8).collect();
            let norm = self.lattice.norm(&a.class.iter().zip(&b.class).map(|(x, y)| x - y).collect::<Vec<_>>());
            notes.push(format!("{} - {}: E^2 = {norm}, class mod 2 = {e:?}", a.label, b.label));
        }
        notes.push(format!("{} curve classes in the G-orbit of the catalog", pool.len()));
        indexcheck::verdict(&self.lattice, &self.hyperplane, &self.h_gens, &self.gal_gens, &preferred, &pool, notes)
    }
}
