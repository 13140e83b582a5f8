use std::collections::{HashMap, VecDeque};

use super::aut::{Atom, SurfAut};
use super::curve::{DivisorCurve, EmbeddedCurve};
use crate::error::{Error, Result};
use crate::field::EmbedCtx;
use crate::poly::MPoly;

/// Deduplicated closure of a curve set under a group, each curve labeled
/// by a shortest word.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub curves: Vec<DivisorCurve>,
    pub embedded: Vec<EmbeddedCurve>,
    /// `(word, base index)` with `curves[i] = word(base curve)`.
    pub words: Vec<(SurfAut, usize)>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.curves.iter().map(|c| c.label.clone()).collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    /// Position of a curve, matched by its embedded canonical form.
    pub fn find(&self, e: &EmbeddedCurve) -> Option<usize> {
        self.embedded.iter().position(|x| x.same_curve(e))
    }
}

/// Breadth-first closure of `base` under `gens`.  Duplicates are detected
/// on the embedded canonical form and confirmed symbolically.
pub fn orbit_generate(base: &[DivisorCurve], gens: &[Atom], ctx: &EmbedCtx) -> Result<Orbit> {
    let mut seen: HashMap<(MPoly<u32>, MPoly<u32>), usize> = HashMap::new();
    let mut orbit = Orbit { curves: vec![], embedded: vec![], words: vec![] };
    let mut queue = VecDeque::new();
    let mut push = |orbit: &mut Orbit, curve: DivisorCurve, word: SurfAut, b: usize, queue: &mut VecDeque<usize>| -> Result<()> {
        let emb = curve.embed(ctx)?;
        if let Some(&k) = seen.get(&emb.key()) {
            if !orbit.curves[k].same_curve(&curve) {
                return Err(Error::VerificationFailed(format!(
                    "{} and {} agree mod p but differ over L",
                    orbit.curves[k].label, curve.label
                )));
            }
            return Ok(());
        }
        seen.insert(emb.key(), orbit.len());
        queue.push_back(orbit.len());
        orbit.curves.push(curve);
        orbit.embedded.push(emb);
        orbit.words.push((word, b));
        Ok(())
    };
    for (b, c) in base.iter().enumerate() {
        push(&mut orbit, c.clone(), SurfAut::identity(), b, &mut queue)?;
    }
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let (w, b) = orbit.words[i].clone();
            let word = SurfAut::psi_or_tau(*g).then_after(&w);
            let mut img = g.apply(&orbit.curves[i]);
            img.label = format!("{word}*{}", base[b].label);
            push(&mut orbit, img, word, b, &mut queue)?;
        }
    }
    Ok(orbit)
}

impl SurfAut {
    fn psi_or_tau(a: Atom) -> SurfAut {
        SurfAut { atoms: vec![a] }
    }
}
