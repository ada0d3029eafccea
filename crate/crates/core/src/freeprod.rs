//! Free products of finite groups: reduced words, factor deletion,
//! evaluation, and bounded enumeration of co-smash kernel words.

use std::fmt;
use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::hom::Hom;

/// A free product `G_0 + ... + G_{k-1}` of finite groups.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    factors: Vec<Arc<FinAlgebra>>,
}

/// A reduced word: adjacent syllables come from different factors and no
/// syllable is an identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(usize, usize)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn syllables(&self) -> &[(usize, usize)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }
}

impl FreeProduct {
    pub fn new(factors: Vec<Arc<FinAlgebra>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("free product needs at least one factor".into()));
        }
        for f in &factors {
            if !f.is_group() {
                return Err(Error::Precondition(format!(
                    "free products are only supported for groups; `{}` is not one",
                    f.name()
                )));
            }
        }
        Ok(FreeProduct { factors })
    }

    pub fn factors(&self) -> &[Arc<FinAlgebra>] {
        &self.factors
    }

    /// Normal form of an arbitrary syllable sequence.
    pub fn word(&self, syllables: &[(usize, usize)]) -> Result<Word> {
        let mut w = Word::identity();
        for &(f, x) in syllables {
            self.check(f, x)?;
            self.push(&mut w.syllables, f, x);
        }
        Ok(w)
    }

    fn check(&self, f: usize, x: usize) -> Result<()> {
        let g = self
            .factors
            .get(f)
            .ok_or_else(|| Error::Mismatch(format!("factor {f} out of range for {} factors", self.factors.len())))?;
        g.check_index(x)
    }

    fn push(&self, w: &mut Vec<(usize, usize)>, f: usize, x: usize) {
        let g = &self.factors[f];
        if x == g.basepoint() {
            return;
        }
        match w.last_mut() {
            Some((lf, lx)) if *lf == f => {
                let y = g.mul(*lx, x);
                if y == g.basepoint() {
                    w.pop();
                } else {
                    *lx = y;
                }
            }
            _ => w.push((f, x)),
        }
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        let mut out = u.syllables.clone();
        for &(f, x) in &v.syllables {
            self.check(f, x)?;
            self.push(&mut out, f, x);
        }
        Ok(Word { syllables: out })
    }

    pub fn inverse(&self, u: &Word) -> Word {
        Word {
            syllables: u
                .syllables
                .iter()
                .rev()
                .map(|&(f, x)| (f, self.factors[f].inv(x)))
                .collect(),
        }
    }

    /// Image under the map killing factor `i`.
    pub fn delete_factor(&self, u: &Word, i: usize) -> Word {
        let mut out = Vec::with_capacity(u.len());
        for &(f, x) in &u.syllables {
            if f != i {
                self.push(&mut out, f, x);
            }
        }
        Word { syllables: out }
    }

    /// Product in `D` of the syllable images, left to right.
    pub fn evaluate(&self, u: &Word, homs: &[Hom]) -> Result<usize> {
        let d = self.check_homs(homs)?;
        let mut acc = d.basepoint();
        for &(f, x) in &u.syllables {
            acc = d.mul(acc, homs[f].apply(x));
        }
        Ok(acc)
    }

    fn check_homs<'h>(&self, homs: &'h [Hom]) -> Result<&'h Arc<FinAlgebra>> {
        if homs.len() != self.factors.len() {
            return Err(Error::Mismatch(format!(
                "{} maps for {} factors",
                homs.len(),
                self.factors.len()
            )));
        }
        let d = homs[0].cod();
        for (i, h) in homs.iter().enumerate() {
            crate::sub::same_parent(h.cod(), d)
                .map_err(|_| Error::Mismatch("maps out of the factors must share a codomain".into()))?;
            crate::sub::same_parent(h.dom(), &self.factors[i])
                .map_err(|_| Error::Mismatch(format!("map {i} does not start at factor {i}")))?;
        }
        if !d.is_group() {
            return Err(Error::Precondition("evaluation target must be a group".into()));
        }
        Ok(d)
    }

    /// True when deleting any single factor yields the identity word; for
    /// two or three factors this is membership in the co-smash kernel.
    pub fn in_cosmash_kernel(&self, u: &Word) -> bool {
        (0..self.factors.len()).all(|i| self.delete_factor(u, i).is_identity())
    }

    /// All reduced words of length `≤ max_len` in the co-smash kernel, in
    /// order of length. Two or three factors only.
    pub fn cosmash_kernel_words(&self, max_len: usize) -> Result<KernelWords<'_>> {
        if !(2..=3).contains(&self.factors.len()) {
            return Err(Error::Precondition(format!(
                "co-smash kernels need 2 or 3 factors, got {}",
                self.factors.len()
            )));
        }
        Ok(KernelWords {
            fp: self,
            max_len,
            level: vec![Word::identity()],
            len: 0,
            pos: 0,
        })
    }

    pub fn display(&self, u: &Word) -> String {
        if u.is_identity() {
            return "1".into();
        }
        u.syllables
            .iter()
            .map(|&(f, x)| format!("{}_{}", self.factors[f].label(x), f))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.syllables.iter().map(|(i, x)| format!("{x}@{i}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Breadth-first stream of co-smash kernel words. Every emitted word is
/// re-checked against the deletion maps.
pub struct KernelWords<'a> {
    fp: &'a FreeProduct,
    max_len: usize,
    level: Vec<Word>,
    len: usize,
    pos: usize,
}

impl Iterator for KernelWords<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            while self.pos < self.level.len() {
                let w = &self.level[self.pos];
                self.pos += 1;
                if self.fp.in_cosmash_kernel(w) {
                    return Some(w.clone());
                }
            }
            if self.len >= self.max_len {
                return None;
            }
            let mut next = Vec::new();
            for w in &self.level {
                let last = w.syllables.last().map(|s| s.0);
                for (f, g) in self.fp.factors.iter().enumerate() {
                    if Some(f) == last {
                        continue;
                    }
                    for x in g.elements().filter(|&x| x != g.basepoint()) {
                        let mut s = w.syllables.clone();
                        s.push((f, x));
                        next.push(Word { syllables: s });
                    }
                }
            }
            self.level = next;
            self.len += 1;
            self.pos = 0;
        }
    }
}

/// Statistics of a bounded kernel-image computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleStats {
    pub half_words: usize,
    pub key_groups: usize,
}

/// Images in `D` of the co-smash kernel words up to a length bound.
#[derive(Debug, Clone)]
pub struct KernelImages {
    /// Sorted element list.
    pub images: Vec<usize>,
    /// One kernel word per non-basepoint image, when requested.
    pub witnesses: Vec<(usize, Word)>,
    pub stats: OracleStats,
}

/// Images in `D` of all co-smash kernel words of length `≤ max_len`.
///
/// Meet in the middle: a kernel word of length `l` splits as `u·v` with
/// `|u| = ⌈l/2⌉`, and lies in the kernel exactly when every deletion of `u`
/// equals the corresponding deletion of `v⁻¹`. So the images are the
/// products `img(u)·img(u')⁻¹` over pairs of short words with equal
/// deletion keys, `|u| ≤ ⌈n/2⌉` and `|u'| ≤ ⌊n/2⌋`.
pub fn kernel_images(fp: &FreeProduct, homs: &[Hom], max_len: usize, witnesses: bool) -> Result<KernelImages> {
    let k = fp.factors.len();
    if !(2..=3).contains(&k) {
        return Err(Error::Precondition(format!("co-smash kernels need 2 or 3 factors, got {k}")));
    }
    let d = fp.check_homs(homs)?.clone();
    let long = max_len.div_ceil(2);
    let short = max_len / 2;

    // Global syllable codes, 1-based so 0 pads.
    let mut code_of: Vec<Vec<u32>> = Vec::new();
    let mut syl: Vec<(usize, usize)> = vec![(usize::MAX, 0)];
    for (f, g) in fp.factors.iter().enumerate() {
        let mut row = vec![0u32; g.size()];
        for x in g.elements().filter(|&x| x != g.basepoint()) {
            row[x] = syl.len() as u32;
            syl.push((f, x));
        }
        code_of.push(row);
    }
    let bps = (usize::BITS - syl.len().leading_zeros()) as usize;
    let img_bits = (usize::BITS - d.size().leading_zeros()) as usize;
    let key_bits = k * long * bps;
    if long > MAX_HALF || key_bits + img_bits + 1 > 128 {
        return Err(Error::Precondition(format!(
            "word bound {max_len} too large for these factors ({key_bits} key bits)"
        )));
    }
    let img_of: Vec<Vec<usize>> = homs.iter().map(|h| h.map().to_vec()).collect();
    let mut state = DfsState {
        fp,
        code_of: &code_of,
        syl: &syl,
        img_of: &img_of,
        d: &d,
        k,
        long,
        short,
        bps,
        img_bits,
        dels: [[0u32; MAX_HALF]; 3],
        del_len: [0; 3],
        path: Vec::new(),
    };

    let mut entries: Vec<u128> = Vec::new();
    state.visit(0, usize::MAX, d.basepoint(), &mut |e, _| entries.push(e));
    entries.sort_unstable();
    entries.dedup();

    let img_mask: u128 = (1u128 << img_bits) - 1;
    let mut hit = vec![false; d.size()];
    // For each image: (key, left image, right image) of its first pair.
    let mut first_pair: Vec<Option<(u128, usize, usize)>> = vec![None; d.size()];
    let mut stats = OracleStats {
        half_words: entries.len(),
        key_groups: 0,
    };
    let mut left: Vec<usize> = Vec::new();
    let mut right: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let key = entries[i] >> (img_bits + 1);
        let mut j = i;
        left.clear();
        right.clear();
        while j < entries.len() && entries[j] >> (img_bits + 1) == key {
            let e = entries[j];
            let img = ((e >> 1) & img_mask) as usize;
            if left.last() != Some(&img) {
                left.push(img);
            }
            if e & 1 == 1 && right.last() != Some(&img) {
                right.push(img);
            }
            j += 1;
        }
        stats.key_groups += 1;
        for &a in &left {
            for &b in &right {
                let x = d.mul(a, d.inv(b));
                if !hit[x] {
                    hit[x] = true;
                    first_pair[x] = Some((key, a, b));
                }
            }
        }
        i = j;
    }
    drop(entries);
    let images: Vec<usize> = (0..d.size()).filter(|&x| hit[x]).collect();

    let mut found = Vec::new();
    if witnesses {
        // Second pass: recover the half words behind each first pair.
        let mut want: std::collections::HashMap<u128, (Option<Word>, Option<Word>)> = Default::default();
        let tag = |key: u128, img: usize| (key << img_bits) | img as u128;
        for p in first_pair.iter().flatten() {
            want.insert(tag(p.0, p.1), (None, None));
            want.insert(tag(p.0, p.2), (None, None));
        }
        state.visit(0, usize::MAX, d.basepoint(), &mut |e, path| {
            if let Some(slot) = want.get_mut(&(e >> 1)) {
                let w = || Word { syllables: path.to_vec() };
                if slot.0.is_none() {
                    slot.0 = Some(w());
                }
                if e & 1 == 1 && slot.1.is_none() {
                    slot.1 = Some(w());
                }
            }
        });
        for x in images.iter().copied().filter(|&x| x != d.basepoint()) {
            let (key, a, b) = first_pair[x].expect("every image has a pair");
            let u = want[&tag(key, a)].0.clone().expect("left half found again");
            let v = want[&tag(key, b)].1.clone().expect("right half found again");
            let w = fp.multiply(&u, &fp.inverse(&v))?;
            if !fp.in_cosmash_kernel(&w) || fp.evaluate(&w, homs)? != x || w.len() > max_len {
                return Err(Error::Internal(format!("kernel witness {} failed re-verification", fp.display(&w))));
            }
            found.push((x, w));
        }
    }
    Ok(KernelImages {
        images,
        witnesses: found,
        stats,
    })
}

const MAX_HALF: usize = 16;

struct DfsState<'a> {
    fp: &'a FreeProduct,
    code_of: &'a [Vec<u32>],
    syl: &'a [(usize, usize)],
    img_of: &'a [Vec<usize>],
    d: &'a FinAlgebra,
    k: usize,
    long: usize,
    short: usize,
    bps: usize,
    img_bits: usize,
    dels: [[u32; MAX_HALF]; 3],
    del_len: [usize; 3],
    path: Vec<(usize, usize)>,
}

impl DfsState<'_> {
    fn entry(&self, len: usize, img: usize) -> u128 {
        let mut key: u128 = 0;
        for i in 0..self.k {
            for p in 0..self.long {
                let c = if p < self.del_len[i] { self.dels[i][p] } else { 0 };
                key = (key << self.bps) | c as u128;
            }
        }
        let short = (len <= self.short) as u128;
        (key << (self.img_bits + 1)) | ((img as u128) << 1) | short
    }

    fn visit(&mut self, len: usize, last: usize, img: usize, sink: &mut dyn FnMut(u128, &[(usize, usize)])) {
        sink(self.entry(len, img), &self.path);
        if len == self.long {
            return;
        }
        for (f, g) in self.fp.factors.iter().enumerate() {
            if f == last {
                continue;
            }
            for x in g.elements().filter(|&x| x != g.basepoint()) {
                let saved = (self.dels, self.del_len);
                for i in 0..self.k {
                    if i != f {
                        self.append(i, f, x);
                    }
                }
                let img2 = self.d.mul(img, self.img_of[f][x]);
                self.path.push((f, x));
                self.visit(len + 1, f, img2, sink);
                self.path.pop();
                (self.dels, self.del_len) = saved;
            }
        }
    }

    fn append(&mut self, i: usize, f: usize, x: usize) {
        let n = self.del_len[i];
        if n > 0 {
            let (lf, lx) = self.syl[self.dels[i][n - 1] as usize];
            if lf == f {
                let g = &self.fp.factors[f];
                let y = g.mul(lx, x);
                if y == g.basepoint() {
                    self.del_len[i] = n - 1;
                } else {
                    self.dels[i][n - 1] = self.code_of[f][y];
                }
                return;
            }
        }
        self.dels[i][n] = self.code_of[f][x];
        self.del_len[i] = n + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::sub::generate_subuniverse;

    fn c2_c2_s3() -> (FreeProduct, Vec<Hom>) {
        let incl = library::c2_in_s3();
        let s3 = library::algebra("S3").unwrap();
        let c2 = incl.dom().clone();
        let fp = FreeProduct::new(vec![c2.clone(), c2, s3.clone()]).unwrap();
        let homs = vec![incl.clone(), incl, Hom::identity(s3)];
        (fp, homs)
    }

    #[test]
    fn spec_examples() {
        let z4 = library::algebra("Z4").unwrap();
        let fp = FreeProduct::new(vec![z4.clone(), z4.clone(), z4]).unwrap();
        let a = fp.word(&[(0, 1)]).unwrap();
        let a_inv = fp.word(&[(0, 3)]).unwrap();
        assert!(fp.multiply(&a, &a_inv).unwrap().is_identity());
        let b = fp.word(&[(1, 1)]).unwrap();
        assert_eq!(fp.multiply(&a, &b).unwrap().syllables(), &[(0, 1), (1, 1)]);
        let ab = fp.word(&[(0, 1), (1, 1)]).unwrap();
        let b_inv_a = fp.word(&[(1, 3), (0, 1)]).unwrap();
        assert_eq!(fp.multiply(&ab, &b_inv_a).unwrap().syllables(), &[(0, 2)]);
        let aba = fp.word(&[(0, 1), (1, 1), (0, 3)]).unwrap();
        assert!(fp.delete_factor(&aba, 1).is_identity());
        assert!(fp.delete_factor(&Word::identity(), 0).is_identity());
        assert_eq!(fp.delete_factor(&ab, 2), ab);
    }

    #[test]
    fn evaluation() {
        let s3 = library::algebra("S3").unwrap();
        let t12 = s3.element("(12)").unwrap();
        let t13 = s3.element("(13)").unwrap();
        let h12 = generate_subuniverse(&s3, [t12]).unwrap().to_algebra();
        let h13 = generate_subuniverse(&s3, [t13]).unwrap().to_algebra();
        let fp = FreeProduct::new(vec![h12.0.clone(), h13.0.clone()]).unwrap();
        let homs = vec![h12.1.clone(), h13.1.clone()];
        assert_eq!(fp.evaluate(&Word::identity(), &homs).unwrap(), s3.basepoint());
        let w = fp.word(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(fp.evaluate(&w, &homs).unwrap(), s3.mul(t12, t13));

        let c2 = h12.0.clone();
        let fp2 = FreeProduct::new(vec![c2.clone(), c2]).unwrap();
        let w = fp2.word(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(fp2.evaluate(&w, &[h12.1.clone(), h12.1.clone()]).unwrap(), s3.basepoint());
    }

    #[test]
    fn binary_kernel_contains_commutator() {
        let c2 = library::algebra("Z2").unwrap();
        let fp = FreeProduct::new(vec![c2.clone(), c2]).unwrap();
        let words: Vec<Word> = fp.cosmash_kernel_words(4).unwrap().collect();
        let abab = fp.word(&[(0, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        assert!(words.contains(&abab));
        assert!(words[0].is_identity());
        let only_id: Vec<Word> = fp.cosmash_kernel_words(0).unwrap().collect();
        assert_eq!(only_id, vec![Word::identity()]);
    }

    #[test]
    fn arity_is_checked() {
        let z2 = library::algebra("Z2").unwrap();
        let fp = FreeProduct::new(vec![z2]).unwrap();
        assert!(fp.cosmash_kernel_words(3).is_err());
        let h = library::algebra("hslat/chain2").unwrap();
        assert!(FreeProduct::new(vec![h]).is_err());
    }

    #[test]
    fn meet_in_middle_matches_brute_force() {
        let (fp, homs) = c2_c2_s3();
        for n in 0..=9 {
            let mut brute: Vec<usize> = fp
                .cosmash_kernel_words(n)
                .unwrap()
                .map(|w| fp.evaluate(&w, &homs).unwrap())
                .collect();
            brute.sort();
            brute.dedup();
            let ki = kernel_images(&fp, &homs, n, true).unwrap();
            for (x, w) in &ki.witnesses {
                assert!(fp.in_cosmash_kernel(w) && fp.evaluate(w, &homs).unwrap() == *x);
            }
            let mitm = ki.images;
            assert_eq!(mitm, brute, "bound {n}");
        }
    }

    #[test]
    fn binary_images_are_the_commutator_subgroup_elements() {
        let s3 = library::algebra("S3").unwrap();
        let fp = FreeProduct::new(vec![s3.clone(), s3.clone()]).unwrap();
        let id = Hom::identity(s3.clone());
        let imgs = kernel_images(&fp, &[id.clone(), id], 4, false).unwrap().images;
        let labels: Vec<String> = imgs.iter().map(|&x| s3.label(x)).collect();
        assert_eq!(labels, vec!["e", "(123)", "(132)"]);
    }
}
