//! GB operators and reference solutions, memoized in process and, for the
//! expensive reference pair `(1024, 256)`, on disk.

use std::any::Any;
use std::collections::HashMap;
use std::fs;
use std::hash::Hash;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use gbnystrom::{
    solve_with_operator, Complex64, GbOperator, Matrix, NystromSolution, Scalar, VolterraProblem,
    VolterraQuadrature,
};

use crate::error::Result;

pub const CACHE_DIR_ENV: &str = "GBNYSTROM_CACHE_DIR";
pub const REFERENCE_DEGREE: usize = 1024;
pub const REFERENCE_ELL: usize = 256;

/// Changes whenever cached data may no longer match what the code computes.
pub const CODE_VERSION_TAG: &str = concat!(env!("CARGO_PKG_VERSION"), "/f1");

const MAGIC: &[u8; 8] = b"GBNYCCH1";

/// Scalars that can be flattened to `f64` for the disk cache.
pub trait CacheScalar: Scalar + 'static {
    const NAME: &'static str;
    fn push_parts(&self, out: &mut Vec<f64>);
    fn read_parts(parts: &[f64]) -> (Self, usize);
}

impl CacheScalar for f64 {
    const NAME: &'static str = "real";
    fn push_parts(&self, out: &mut Vec<f64>) {
        out.push(*self);
    }
    fn read_parts(parts: &[f64]) -> (Self, usize) {
        (parts[0], 1)
    }
}

impl CacheScalar for Complex64 {
    const NAME: &'static str = "complex";
    fn push_parts(&self, out: &mut Vec<f64>) {
        out.extend([self.re, self.im]);
    }
    fn read_parts(parts: &[f64]) -> (Self, usize) {
        (Complex64::new(parts[0], parts[1]), 2)
    }
}

type Slot<V> = Arc<Mutex<Option<V>>>;
type SharedSolution = Arc<dyn Any + Send + Sync>;
type OperatorSlots = HashMap<(usize, usize), Slot<Arc<GbOperator>>>;

pub struct ReferenceCache {
    dir: Option<PathBuf>,
    tag: String,
    operators: Mutex<OperatorSlots>,
    solutions: Mutex<HashMap<String, Slot<SharedSolution>>>,
}

impl std::fmt::Debug for ReferenceCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReferenceCache")
            .field("dir", &self.dir)
            .field("tag", &self.tag)
            .finish_non_exhaustive()
    }
}

impl ReferenceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::build(Some(dir.into()), CODE_VERSION_TAG.to_string())
    }

    /// No disk persistence.
    pub fn in_memory() -> Self {
        Self::build(None, CODE_VERSION_TAG.to_string())
    }

    /// `$GBNYSTROM_CACHE_DIR`, else `gbnystrom-cache` under the system temp dir.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("gbnystrom-cache"));
        Self::new(dir)
    }

    pub fn with_version_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    fn build(dir: Option<PathBuf>, tag: String) -> Self {
        Self {
            dir,
            tag,
            operators: Mutex::default(),
            solutions: Mutex::default(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn version_tag(&self) -> &str {
        &self.tag
    }

    /// `B_{m,ℓ}`, built once per process.
    pub fn operator(&self, m: usize, ell: usize) -> Result<Arc<GbOperator>> {
        memoize(&self.operators, (m, ell), || {
            let persist = (m, ell) == (REFERENCE_DEGREE, REFERENCE_ELL);
            let key = format!("operator-m{m}-l{ell}");
            if persist {
                if let Some(data) = self.load(&key) {
                    if let Ok(c) = Matrix::from_row_major(m + 1, m + 1, data) {
                        return Ok(Arc::new(GbOperator::from_basis_change(m, ell, c)?));
                    }
                }
            }
            let op = Arc::new(GbOperator::new(m, ell)?);
            if persist {
                self.store(&key, op.basis_change().as_slice());
            }
            Ok(op)
        })
    }

    /// `f^{(256)}_{1024}` for the problem registered under `id`.
    pub fn reference_solution<T: CacheScalar>(
        &self,
        id: &str,
        problem: &VolterraProblem<T>,
    ) -> Result<Arc<NystromSolution<T>>> {
        let (m, ell) = (REFERENCE_DEGREE, REFERENCE_ELL);
        let key = format!("reference-{id}-{}-m{m}-l{ell}", T::NAME);
        let shared = memoize(&self.solutions, key.clone(), || {
            let op = self.operator(m, ell)?;
            if let Some(data) = self.load(&key) {
                if let Some(sol) = decode_solution(&data, Arc::clone(&op), problem)? {
                    return Ok(Arc::new(sol) as SharedSolution);
                }
            }
            let sol = solve_with_operator(problem, op)?;
            let mut data = vec![sol.cond_inf()];
            for v in sol.nodal_values() {
                v.push_parts(&mut data);
            }
            self.store(&key, &data);
            Ok(Arc::new(sol) as SharedSolution)
        })?;
        Ok(shared
            .downcast::<NystromSolution<T>>()
            .expect("solution keys include the scalar type"))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.bin")))
    }

    fn full_key(&self, key: &str) -> String {
        format!("{key}@{}", self.tag)
    }

    /// Cached payload for `key`, if present and written under the same tag.
    pub fn load(&self, key: &str) -> Option<Vec<f64>> {
        let bytes = fs::read(self.path(key)?).ok()?;
        let expected = self.full_key(key);
        let rest = bytes.strip_prefix(MAGIC.as_slice())?;
        let (len, rest) = split_u64(rest)?;
        let (stored_key, rest) = split_at(rest, usize::try_from(len).ok()?)?;
        if stored_key != expected.as_bytes() {
            return None;
        }
        let (count, rest) = split_u64(rest)?;
        if rest.len() as u64 != count.checked_mul(8)? {
            return None;
        }
        Some(
            rest.chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    }

    /// Best effort: a failed write only costs a recomputation next time.
    pub fn store(&self, key: &str, data: &[f64]) {
        let Some(path) = self.path(key) else { return };
        let full = self.full_key(key);
        let mut bytes = Vec::with_capacity(32 + full.len() + 8 * data.len());
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&(full.len() as u64).to_le_bytes());
        bytes.extend_from_slice(full.as_bytes());
        bytes.extend_from_slice(&(data.len() as u64).to_le_bytes());
        for v in data {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let written = path
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|_| fs::write(&tmp, &bytes))
            .and_then(|_| fs::rename(&tmp, &path));
        if written.is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

fn split_at(bytes: &[u8], n: usize) -> Option<(&[u8], &[u8])> {
    (n <= bytes.len()).then(|| bytes.split_at(n))
}

fn split_u64(bytes: &[u8]) -> Option<(u64, &[u8])> {
    let (head, rest) = split_at(bytes, 8)?;
    Some((u64::from_le_bytes(head.try_into().ok()?), rest))
}

fn decode_solution<T: CacheScalar>(
    data: &[f64],
    op: Arc<GbOperator>,
    problem: &VolterraProblem<T>,
) -> Result<Option<NystromSolution<T>>> {
    let Some((&cond, mut rest)) = data.split_first() else {
        return Ok(None);
    };
    let mut nodal = Vec::with_capacity(op.degree() + 1);
    while !rest.is_empty() {
        let (v, used) = T::read_parts(rest);
        nodal.push(v);
        rest = &rest[used..];
    }
    if nodal.len() != op.degree() + 1 {
        return Ok(None);
    }
    let quadrature = VolterraQuadrature::new(op, problem.weights())?;
    Ok(Some(NystromSolution::from_parts(quadrature, nodal, cond)?))
}

fn memoize<K: Eq + Hash, V: Clone>(
    map: &Mutex<HashMap<K, Slot<V>>>,
    key: K,
    init: impl FnOnce() -> Result<V>,
) -> Result<V> {
    let slot = Arc::clone(map.lock().unwrap().entry(key).or_default());
    let mut guard = slot.lock().unwrap();
    if let Some(v) = guard.as_ref() {
        return Ok(v.clone());
    }
    let v = init()?;
    *guard = Some(v.clone());
    Ok(v)
}
