//! Synthetic unordered databases: generation, match planting, exhaustive
//! match counting and the `GDB1` binary codec.

use alloc::vec;
use alloc::vec::Vec;

use crate::criterion::Criterion;
use crate::error::{invalid, Error, Result};
use crate::rng::SplitMix64;

pub const MAX_WIDTH: usize = 4096;
pub const MAX_DATASETS: u64 = 1 << 24;
pub const DEFAULT_PROBE_BUDGET: u64 = 1_000_000;

pub const MAGIC: &[u8; 4] = b"GDB1";
pub const HEADER_LEN: usize = 4 + 8 + 4 + 8;

/// A fixed-width bit string. Bit `i` lives in byte `i / 8` at position
/// `i % 8`; padding bits in the last byte are always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dataset {
    width: usize,
    bytes: Vec<u8>,
}

#[inline]
pub(crate) fn stride(width: usize) -> usize {
    width.div_ceil(8)
}

fn padding_mask(width: usize) -> u8 {
    match width % 8 {
        0 => 0xFF,
        r => (1u8 << r) - 1,
    }
}

impl Dataset {
    pub fn zeros(width: usize) -> Self {
        Self {
            width,
            bytes: vec![0; stride(width)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut ds = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            ds.set(i, b);
        }
        ds
    }

    /// Packed little-endian bytes; excess bytes are ignored and padding bits
    /// are cleared.
    pub fn from_bytes(width: usize, bytes: &[u8]) -> Self {
        let mut ds = Self::zeros(width);
        let n = ds.bytes.len().min(bytes.len());
        ds.bytes[..n].copy_from_slice(&bytes[..n]);
        if let Some(last) = ds.bytes.last_mut() {
            *last &= padding_mask(width);
        }
        ds
    }

    /// The low `width` bits of `value` (width at most 64).
    pub fn from_u64(width: usize, value: u64) -> Self {
        debug_assert!(width <= 64);
        Self::from_bytes(width, &value.to_le_bytes())
    }

    fn random(width: usize, rng: &mut SplitMix64) -> Self {
        let mut bytes = vec![0u8; stride(width)];
        for chunk in bytes.chunks_mut(8) {
            let word = rng.next_u64().to_le_bytes();
            chunk.copy_from_slice(&word[..chunk.len()]);
        }
        if let Some(last) = bytes.last_mut() {
            *last &= padding_mask(width);
        }
        Self { width, bytes }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        self.bytes[i / 8] >> (i % 8) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.width,
            "bit {i} out of range for width {}",
            self.width
        );
        let mask = 1u8 << (i % 8);
        if value {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    pub fn count_ones(&self) -> u32 {
        self.bytes.iter().map(|b| b.count_ones()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Database {
    width: usize,
    seed: u64,
    datasets: Vec<Dataset>,
}

fn check_shape(count: u64, width: usize) -> Result<()> {
    if count == 0 || count > MAX_DATASETS {
        return Err(invalid(alloc::format!(
            "dataset count {count} outside [1, {MAX_DATASETS}]"
        )));
    }
    if width == 0 || width > MAX_WIDTH {
        return Err(invalid(alloc::format!(
            "dataset width {width} outside [1, {MAX_WIDTH}]"
        )));
    }
    Ok(())
}

impl Database {
    /// Assemble a database from existing datasets, checking that every one
    /// has the declared width.
    pub fn from_datasets(width: usize, seed: u64, datasets: Vec<Dataset>) -> Result<Self> {
        check_shape(datasets.len() as u64, width)?;
        if let Some(i) = datasets.iter().position(|d| d.width() != width) {
            return Err(invalid(alloc::format!(
                "dataset {i} has width {} but database width is {width}",
                datasets[i].width()
            )));
        }
        Ok(Self {
            width,
            seed,
            datasets,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn datasets(&self) -> &[Dataset] {
        &self.datasets
    }

    pub fn get(&self, i: usize) -> Option<&Dataset> {
        self.datasets.get(i)
    }
}

/// `count_n` datasets of `width_d` uniformly random bits.
///
/// Each dataset consumes `ceil(d / 64)` generator outputs in order; output
/// words are laid down little-endian and padding bits are cleared.
pub fn generate_database(count_n: u64, width_d: usize, seed: u64) -> Result<Database> {
    check_shape(count_n, width_d)?;
    let mut rng = SplitMix64::new(seed);
    let datasets = (0..count_n)
        .map(|_| Dataset::random(width_d, &mut rng))
        .collect();
    Ok(Database {
        width: width_d,
        seed,
        datasets,
    })
}

fn check_width(db: &Database, criterion: &Criterion) -> Result<()> {
    if db.width() != criterion.input_width() {
        return Err(invalid(alloc::format!(
            "criterion expects {} input bits but datasets have {}",
            criterion.input_width(),
            db.width()
        )));
    }
    Ok(())
}

/// Exhaustive ground-truth match count.
pub fn count_matches(db: &Database, criterion: &Criterion) -> Result<usize> {
    check_width(db, criterion)?;
    let mut count = 0;
    for ds in db.datasets() {
        if criterion.evaluate(ds)? {
            count += 1;
        }
    }
    Ok(count)
}

pub fn plant_matches(
    db: &Database,
    criterion: &Criterion,
    target_count: usize,
    seed: u64,
) -> Result<Database> {
    plant_matches_with_budget(db, criterion, target_count, seed, DEFAULT_PROBE_BUDGET)
}

/// Rewrite datasets until exactly `target_count` satisfy `criterion`.
///
/// If there are too few matches, randomly chosen non-matching datasets are
/// overwritten with a satisfying assignment found by random probing; if
/// there are too many, randomly chosen matching datasets are overwritten
/// with a non-satisfying one. Everything else is left as is.
pub fn plant_matches_with_budget(
    db: &Database,
    criterion: &Criterion,
    target_count: usize,
    seed: u64,
    probe_budget: u64,
) -> Result<Database> {
    check_width(db, criterion)?;
    if target_count > db.len() {
        return Err(invalid(alloc::format!(
            "cannot plant {target_count} matches in {} datasets",
            db.len()
        )));
    }

    let mut matching = Vec::new();
    let mut other = Vec::new();
    for (i, ds) in db.datasets().iter().enumerate() {
        if criterion.evaluate(ds)? {
            matching.push(i);
        } else {
            other.push(i);
        }
    }

    let mut out = db.clone();
    let mut rng = SplitMix64::new(seed);
    let changes = target_count.abs_diff(matching.len());
    let (pool, want, kind) = match target_count.cmp(&matching.len()) {
        core::cmp::Ordering::Equal => return Ok(out),
        core::cmp::Ordering::Greater => (other, true, "satisfying"),
        core::cmp::Ordering::Less => (matching, false, "non-satisfying"),
    };

    let replacement =
        probe(criterion, want, &mut rng, probe_budget).ok_or(Error::UnsatisfiablePlant {
            kind,
            trials: probe_budget,
        })?;
    for idx in choose(pool, changes, &mut rng) {
        out.datasets[idx] = replacement.clone();
    }
    Ok(out)
}

fn probe(criterion: &Criterion, want: bool, rng: &mut SplitMix64, budget: u64) -> Option<Dataset> {
    let width = criterion.input_width();
    (0..budget)
        .map(|_| Dataset::random(width, rng))
        .find(|ds| criterion.evaluate(ds).ok() == Some(want))
}

/// The first `k` entries of a partial Fisher-Yates shuffle of `pool`.
fn choose(mut pool: Vec<usize>, k: usize, rng: &mut SplitMix64) -> Vec<usize> {
    debug_assert!(k <= pool.len());
    for i in 0..k {
        let j = i + rng.below((pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Serialize to the `GDB1` layout: magic, `u64` N, `u32` d, `u64` seed
/// (all little-endian), then N datasets of `ceil(d / 8)` bytes each.
pub fn encode_database(db: &Database) -> Vec<u8> {
    let stride = stride(db.width());
    let mut out = Vec::with_capacity(HEADER_LEN + stride * db.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(db.len() as u64).to_le_bytes());
    out.extend_from_slice(&(db.width() as u32).to_le_bytes());
    out.extend_from_slice(&db.seed().to_le_bytes());
    for ds in db.datasets() {
        out.extend_from_slice(ds.as_bytes());
    }
    out
}

fn format_err(offset: usize, reason: impl Into<alloc::string::String>) -> Error {
    Error::Format {
        offset,
        reason: reason.into(),
    }
}

pub fn decode_database(bytes: &[u8]) -> Result<Database> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(format_err(0, "missing GDB1 magic"));
    }
    if bytes.len() < HEADER_LEN {
        return Err(format_err(bytes.len(), "truncated header"));
    }
    let count = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let width = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let seed = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    if count == 0 || count > MAX_DATASETS {
        return Err(format_err(
            4,
            alloc::format!("dataset count {count} unsupported"),
        ));
    }
    if width == 0 || width > MAX_WIDTH {
        return Err(format_err(
            12,
            alloc::format!("dataset width {width} unsupported"),
        ));
    }

    let stride = stride(width);
    let payload = &bytes[HEADER_LEN..];
    let expected = count as usize * stride;
    if payload.len() < expected {
        let complete = payload.len() / stride;
        return Err(format_err(
            HEADER_LEN + complete * stride,
            alloc::format!("truncated payload: header declares {count} datasets, found {complete}"),
        ));
    }
    if payload.len() > expected {
        return Err(format_err(
            HEADER_LEN + expected,
            "trailing bytes after last dataset",
        ));
    }

    let mask = padding_mask(width);
    let mut datasets = Vec::with_capacity(count as usize);
    for (i, chunk) in payload.chunks_exact(stride).enumerate() {
        if chunk[stride - 1] & !mask != 0 {
            return Err(format_err(
                HEADER_LEN + i * stride + stride - 1,
                "nonzero padding bits",
            ));
        }
        datasets.push(Dataset {
            width,
            bytes: chunk.to_vec(),
        });
    }
    Ok(Database {
        width,
        seed,
        datasets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{equality_criterion, Criterion};

    fn always(width: usize, value: bool) -> Criterion {
        // x0 XNOR x0 is constant true; XOR is constant false
        let src = if value { "XNOR" } else { "XOR" };
        Criterion::parse(&alloc::format!(
            "criterion d={width}\ng0 = {src} x0 x0\nout = g0\n"
        ))
        .unwrap()
    }

    #[test]
    fn minimal_database() {
        let db = generate_database(1, 1, 3).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(db.width(), 1);
        assert_eq!(db.datasets()[0].as_bytes().len(), 1);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_database(1024, 16, 11).unwrap();
        let b = generate_database(1024, 16, 11).unwrap();
        assert_eq!(encode_database(&a), encode_database(&b));
        let c = generate_database(1024, 16, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_bits_look_uniform() {
        let db = generate_database(64, 8, 42).unwrap();
        let ones: u32 = db.datasets().iter().map(Dataset::count_ones).sum();
        // binomial(512, 1/2): mean 256, sigma = sqrt(128)
        let sigma = 128f64.sqrt();
        assert!((ones as f64 - 256.0).abs() <= 4.0 * sigma, "ones = {ones}");
    }

    #[test]
    fn padding_is_clear() {
        let db = generate_database(100, 13, 1).unwrap();
        for ds in db.datasets() {
            assert_eq!(ds.as_bytes()[1] & !0x1F, 0);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            generate_database(1, 0, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_database(1, 4097, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_database(0, 8, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(generate_database(1, 4096, 0).is_ok());
    }

    #[test]
    fn counting_tautology_and_contradiction() {
        let db = generate_database(50, 5, 9).unwrap();
        assert_eq!(count_matches(&db, &always(5, true)).unwrap(), 50);
        assert_eq!(count_matches(&db, &always(5, false)).unwrap(), 0);
    }

    #[test]
    fn count_rejects_width_mismatch() {
        let db = generate_database(4, 5, 9).unwrap();
        assert!(matches!(
            count_matches(&db, &always(6, true)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn plant_noop_cases() {
        let db = generate_database(32, 6, 2).unwrap();
        assert_eq!(plant_matches(&db, &always(6, false), 0, 1).unwrap(), db);
        assert_eq!(plant_matches(&db, &always(6, true), 32, 1).unwrap(), db);
    }

    #[test]
    fn plant_exact_count_and_untouched_rest() {
        let db = generate_database(256, 8, 5).unwrap();
        let pattern: Vec<bool> = (0..8).map(|i| i % 3 == 0).collect();
        let crit = equality_criterion(&pattern).unwrap();
        let planted = plant_matches(&db, &crit, 3, 77).unwrap();
        let brute = planted
            .datasets()
            .iter()
            .filter(|d| d.bits().eq(pattern.iter().copied()))
            .count();
        assert_eq!(brute, 3);
        assert_eq!(count_matches(&planted, &crit).unwrap(), 3);
        for (a, b) in db.datasets().iter().zip(planted.datasets()) {
            if a != b {
                assert!(b.bits().eq(pattern.iter().copied()));
            }
        }
    }

    #[test]
    fn plant_can_remove_matches() {
        let db = generate_database(128, 2, 5).unwrap();
        let crit = equality_criterion(&[true, false]).unwrap();
        let before = count_matches(&db, &crit).unwrap();
        assert!(before > 5);
        let planted = plant_matches(&db, &crit, 1, 3).unwrap();
        assert_eq!(count_matches(&planted, &crit).unwrap(), 1);
    }

    #[test]
    fn plant_fails_on_exhausted_budget() {
        let db = generate_database(16, 4, 5).unwrap();
        let err = plant_matches(&db, &always(4, false), 1, 0).unwrap_err();
        assert!(matches!(
            err,
            Error::UnsatisfiablePlant {
                kind: "satisfying",
                ..
            }
        ));
        let err = plant_matches_with_budget(&db, &always(4, true), 0, 0, 10).unwrap_err();
        assert!(matches!(err, Error::UnsatisfiablePlant { trials: 10, .. }));
    }

    #[test]
    fn codec_roundtrip() {
        let db = generate_database(37, 21, 0xDEAD).unwrap();
        let bytes = encode_database(&db);
        assert_eq!(bytes.len(), HEADER_LEN + 37 * 3);
        assert_eq!(decode_database(&bytes).unwrap(), db);
    }

    #[test]
    fn codec_rejects_bad_magic() {
        let mut bytes = encode_database(&generate_database(2, 8, 0).unwrap());
        bytes[0] = b'X';
        assert!(matches!(
            decode_database(&bytes),
            Err(Error::Format { offset: 0, .. })
        ));
    }

    #[test]
    fn codec_rejects_truncation() {
        let bytes = encode_database(&generate_database(10, 16, 0).unwrap());
        let cut = &bytes[..bytes.len() - 3];
        match decode_database(cut) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, HEADER_LEN + 8 * 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            decode_database(&bytes[..10]),
            Err(Error::Format { .. })
        ));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(decode_database(&long), Err(Error::Format { .. })));
    }

    #[test]
    fn codec_rejects_dirty_padding() {
        let mut bytes = encode_database(&generate_database(1, 3, 0).unwrap());
        bytes[HEADER_LEN] |= 0x80;
        assert!(matches!(
            decode_database(&bytes),
            Err(Error::Format {
                offset: HEADER_LEN,
                ..
            })
        ));
    }
}
