//! Exhaustive classification of decimations up to cyclotomic equivalence
//! and inversion, and finite checks of open conjectures on the results.

use crate::arith;
use crate::error::{Error, Result};
use crate::families::{self, Prediction};
use crate::gf::FieldCtx;
use crate::spectra::{self, SpectrumTable};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// Decimations `d·p^j` and `d^{-1}·p^j` share one spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct DecimationClass {
    /// Smallest member.
    pub representative: u64,
    pub members: Vec<u64>,
    pub spectrum: SpectrumTable,
}

impl DecimationClass {
    pub fn value_count(&self) -> usize {
        self.spectrum.value_count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "representative": self.representative,
            "members": self.members,
            "t": self.value_count(),
            "spectrum": self.spectrum.to_json()["entries"],
        })
    }
}

/// Sorted members of the class of `d` (coprime to `p^n - 1`).
pub fn class_members(ctx: &FieldCtx, d: u64) -> Vec<u64> {
    let m = ctx.group_order() as u64;
    let d = d % m;
    let inv = arith::mod_inverse(d, m).expect("d is coprime");
    let mut set = BTreeSet::new();
    for j in 0..ctx.n() {
        let pj = ctx.pow_p(j) as u64 % m;
        set.insert(arith::mul_mod(d, pj, m));
        set.insert(arith::mul_mod(inv, pj, m));
    }
    set.into_iter().collect()
}

/// Smallest member of the class of `d`.
pub fn class_representative(ctx: &FieldCtx, d: u64) -> u64 {
    class_members(ctx, d)[0]
}

/// Partition of the nondegenerate coprime decimations, one list per class.
pub fn partition(ctx: &FieldCtx) -> Vec<Vec<u64>> {
    let m = ctx.group_order() as u64;
    let mut seen = vec![false; m as usize];
    let mut classes = Vec::new();
    for d in 1..m.max(2) {
        if seen[d as usize] || arith::gcd(d, m) != 1 || spectra::is_degenerate(ctx, d) {
            continue;
        }
        let members = class_members(ctx, d);
        for &x in &members {
            seen[x as usize] = true;
        }
        classes.push(members);
    }
    classes
}

/// Every class with its spectrum, ordered by representative.
pub fn canonical_classes(ctx: &FieldCtx, cache: Option<&SpectrumCache>) -> Result<Vec<DecimationClass>> {
    let parts = partition(ctx);
    let known = match cache {
        Some(c) => c.load(ctx)?,
        None => HashMap::new(),
    };
    let classes: Vec<DecimationClass> = parts
        .into_par_iter()
        .map(|members| {
            let rep = members[0];
            let spectrum = match known.get(&rep) {
                Some(t) => t.clone(),
                None => spectra::spectrum(ctx, rep)?,
            };
            Ok(DecimationClass {
                representative: rep,
                members,
                spectrum,
            })
        })
        .collect::<Result<_>>()?;
    if let Some(c) = cache {
        let fresh: Vec<&SpectrumTable> = classes
            .iter()
            .filter(|k| !known.contains_key(&k.representative))
            .map(|k| &k.spectrum)
            .collect();
        c.append(ctx, &fresh)?;
    }
    Ok(classes)
}

/// Classes bucketed by the number of distinct values.
pub fn classify_by_value_count(classes: Vec<DecimationClass>) -> BTreeMap<usize, Vec<DecimationClass>> {
    let mut out: BTreeMap<usize, Vec<DecimationClass>> = BTreeMap::new();
    for c in classes {
        out.entry(c.value_count()).or_default().push(c);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MinusOneReport {
    pub p: u32,
    pub n: u32,
    /// Qualifying decimations examined, degenerate ones included.
    pub decimations: u64,
    pub classes: u64,
    /// Class representatives where `-1` never occurs.
    pub counterexamples: Vec<u64>,
}

impl MinusOneReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Whether `C_d(τ) = -1` occurs for every `d` coprime to `p^n - 1` with
/// `d ≡ 1 mod p - 1`. Degenerate `d` give `-1` at every shift but one.
pub fn check_minus_one(ctx: &FieldCtx, classes: &[DecimationClass]) -> MinusOneReport {
    let p = ctx.p() as u64;
    let q1 = ctx.group_order() as u64;
    let qualifies = |d: u64| p == 2 || d % (p - 1) == 1 % (p - 1);
    let minus_one = crate::cyclo::CycInt::from_int(ctx.p(), -1);
    let mut report = MinusOneReport {
        p: ctx.p(),
        n: ctx.n(),
        decimations: (0..ctx.n()).filter(|&j| qualifies(ctx.pow_p(j) as u64 % q1)).count() as u64,
        classes: 0,
        counterexamples: vec![],
    };
    for c in classes {
        let members = c.members.iter().filter(|&&d| qualifies(d)).count() as u64;
        if members == 0 {
            continue;
        }
        report.decimations += members;
        report.classes += 1;
        if c.spectrum.count(&minus_one) == 0 {
            report.counterexamples.push(c.representative);
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub p: u32,
    pub n: u32,
    /// Representatives of the exhaustive three-valued classes.
    pub observed: Vec<u64>,
    /// Representatives reached by a catalog three-valued family.
    pub predicted: Vec<u64>,
    /// Observed but not predicted.
    pub unexplained: Vec<u64>,
    /// Predicted but not observed.
    pub missing: Vec<u64>,
    /// Representative → families that produce it.
    pub sources: BTreeMap<u64, Vec<String>>,
}

impl CompletenessReport {
    pub fn exact(&self) -> bool {
        self.unexplained.is_empty() && self.missing.is_empty()
    }
}

/// Compares the exhaustive three-valued classes with the catalog.
pub fn three_valued_completeness(ctx: &FieldCtx, classes: &[DecimationClass]) -> CompletenessReport {
    let (p, n) = (ctx.p(), ctx.n());
    let observed: BTreeSet<u64> = classes
        .iter()
        .filter(|c| c.value_count() == 3)
        .map(|c| c.representative)
        .collect();
    let mut sources: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for f in families::catalog() {
        for (params, inst) in f.points(p, n) {
            let three = matches!(&inst.prediction, Prediction::Distribution { entries } if entries.len() == 3);
            if !three || spectra::is_degenerate(ctx, inst.d) {
                continue;
            }
            let label = if params.is_empty() {
                f.id.to_string()
            } else {
                let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", f.id, ps.join(","))
            };
            let list = sources.entry(class_representative(ctx, inst.d)).or_default();
            if !list.contains(&label) {
                list.push(label);
            }
        }
    }
    let predicted: BTreeSet<u64> = sources.keys().copied().collect();
    CompletenessReport {
        p,
        n,
        unexplained: observed.difference(&predicted).copied().collect(),
        missing: predicted.difference(&observed).copied().collect(),
        observed: observed.into_iter().collect(),
        predicted: predicted.into_iter().collect(),
        sources,
    }
}

/// On-disk store of class spectra: one JSON-lines file per `(p, n)`,
/// each line `{"modulus": [...], "class": rep, "spectrum": {...}}`.
#[derive(Clone, Debug)]
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SpectrumCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, p: u32, n: u32) -> PathBuf {
        self.dir.join(format!("spectra_p{p}_n{n}.jsonl"))
    }

    /// Stored spectra for this field's modulus, keyed by representative.
    pub fn load(&self, ctx: &FieldCtx) -> Result<HashMap<u64, SpectrumTable>> {
        let path = self.path(ctx.p(), ctx.n());
        let mut out = HashMap::new();
        if !path.exists() {
            return Ok(out);
        }
        let modulus = ctx.spec().coeffs();
        for line in BufReader::new(fs::File::open(&path)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Value = serde_json::from_str(&line)?;
            let same_field = rec
                .get("modulus")
                .and_then(Value::as_array)
                .is_some_and(|m| m.iter().map(Value::as_u64).eq(modulus.iter().map(|&c| Some(c as u64))));
            if !same_field {
                continue;
            }
            let rep = rec
                .get("class")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("cache line lacks `class`: {}", path.display())))?;
            let table = SpectrumTable::from_json(rec.get("spectrum").unwrap_or(&Value::Null))?;
            out.insert(rep, table);
        }
        Ok(out)
    }

    pub fn append(&self, ctx: &FieldCtx, tables: &[&SpectrumTable]) -> Result<()> {
        if tables.is_empty() {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)?;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.path(ctx.p(), ctx.n()))?;
        let mut buf = String::new();
        for t in tables {
            let rec = json!({
                "modulus": ctx.spec().coeffs(),
                "class": t.d,
                "spectrum": t.to_json(),
            });
            buf.push_str(&rec.to_string());
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    #[test]
    fn partition_is_disjoint_and_covering() {
        for (p, n) in [(2, 5), (2, 6), (2, 8), (3, 4), (5, 2)] {
            let c = ctx(p, n);
            let m = c.group_order() as u64;
            let parts = partition(&c);
            let mut all: Vec<u64> = parts.iter().flatten().copied().collect();
            let len = all.len();
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), len);
            let want: Vec<u64> = (1..m)
                .filter(|&d| arith::gcd(d, m) == 1 && !spectra::is_degenerate(&c, d))
                .collect();
            assert_eq!(all, want);
            for members in &parts {
                let inv = arith::mod_inverse(members[0], m).unwrap();
                assert!(members.contains(&inv));
            }
        }
    }

    #[test]
    fn n5_classes() {
        let c = ctx(2, 5);
        let reps: Vec<u64> = partition(&c).iter().map(|m| m[0]).collect();
        assert_eq!(reps, vec![3, 5, 15]);
        let classes = canonical_classes(&c, None).unwrap();
        for k in &classes {
            assert!(k.value_count() >= 3);
            let other = spectra::spectrum(&c, *k.members.last().unwrap()).unwrap();
            assert!(other.same_distribution(&k.spectrum));
        }
    }

    #[test]
    fn buckets_and_checks() {
        let c = ctx(2, 4);
        let b = classify_by_value_count(canonical_classes(&c, None).unwrap());
        assert!(!b.contains_key(&3));
        let c = ctx(2, 6);
        let classes = canonical_classes(&c, None).unwrap();
        assert!(check_minus_one(&c, &classes).holds());
        let r = three_valued_completeness(&c, &classes);
        assert!(r.exact(), "{r:?}");
        assert!(!r.observed.is_empty());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SpectrumCache::new(dir.path());
        let c = ctx(2, 7);
        let first = canonical_classes(&c, Some(&cache)).unwrap();
        let lines = fs::read_to_string(cache.path(2, 7)).unwrap().lines().count();
        assert_eq!(lines, first.len());
        let second = canonical_classes(&c, Some(&cache)).unwrap();
        assert_eq!(fs::read_to_string(cache.path(2, 7)).unwrap().lines().count(), lines);
        for (a, b) in first.iter().zip(&second) {
            assert!(a.spectrum.same_distribution(&b.spectrum));
        }
    }
}
