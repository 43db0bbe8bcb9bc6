//! Byte-exact placement and delivery simulation over a PDA: seeded file
//! libraries, star-pattern placement, XOR multicast delivery in broadcast
//! and device-to-device modes, decoding, and digest-checked round trips.

use std::collections::HashMap;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::pda::{validate_pda, Entry, Pda};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid demand: {0}")]
    InvalidDemand(String),
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("PDA is not regular: {0}")]
    NotRegular(String),
}

/// N equal-length files of seeded pseudorandom bytes. Subfile f of file i is
/// the f-th of F contiguous slices.
#[derive(Debug, Clone)]
pub struct FileLibrary {
    pub files: Vec<Vec<u8>>,
    pub file_size: usize,
    pub seed: u64,
}

impl FileLibrary {
    pub fn generate(n: usize, file_size: usize, seed: u64) -> FileLibrary {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files = (0..n)
            .map(|_| {
                let mut buf = vec![0u8; file_size];
                rng.fill_bytes(&mut buf);
                buf
            })
            .collect();
        FileLibrary {
            files,
            file_size,
            seed,
        }
    }

    pub fn subfile(&self, file: usize, subfile: usize, subfiles: usize) -> &[u8] {
        let size = self.file_size / subfiles;
        &self.files[file][subfile * size..(subfile + 1) * size]
    }

    pub fn digest(&self, file: usize) -> [u8; 32] {
        Sha256::digest(&self.files[file]).into()
    }
}

/// Per-user cached subfiles, keyed by (file, subfile).
#[derive(Debug, Clone)]
pub struct CacheState {
    pub caches: Vec<HashMap<(usize, usize), Vec<u8>>>,
}

impl CacheState {
    /// Bytes held by one user.
    pub fn cache_bytes(&self, user: usize) -> usize {
        self.caches[user].values().map(Vec::len).sum()
    }
}

/// Delivery-phase output. Broadcast mode fills `broadcast` with one payload
/// per label; D2D mode fills `d2d` with (label, transmitting position)
/// payloads.
#[derive(Debug, Clone)]
pub struct TransmissionLog {
    pub demands: Vec<usize>,
    pub broadcast: Vec<Vec<u8>>,
    pub d2d: Vec<(u32, usize, Vec<u8>)>,
    /// Transmitting user of each D2D payload.
    pub d2d_senders: Vec<usize>,
}

impl TransmissionLog {
    pub fn total_bytes(&self) -> usize {
        self.broadcast.iter().map(Vec::len).sum::<usize>()
            + self.d2d.iter().map(|(_, _, p)| p.len()).sum::<usize>()
    }
}

fn xor_into(acc: &mut [u8], rhs: &[u8]) {
    for (a, b) in acc.iter_mut().zip(rhs) {
        *a ^= *b;
    }
}

fn check_demands(pda: &Pda, n: usize, demands: &[usize]) -> Result<(), SimError> {
    if demands.len() != pda.users {
        return Err(SimError::InvalidDemand(format!(
            "expected {} demands, got {}",
            pda.users,
            demands.len()
        )));
    }
    if let Some(&d) = demands.iter().find(|&&d| d >= n) {
        return Err(SimError::InvalidDemand(format!(
            "demanded file {d} outside library of {n}"
        )));
    }
    Ok(())
}

/// Placement phase: user k caches subfile f of every file iff the PDA cell
/// is a star.
pub fn place(pda: &Pda, library: &FileLibrary) -> Result<CacheState, SimError> {
    if library.file_size % pda.subfiles != 0 {
        return Err(SimError::SizeMismatch(format!(
            "file size {} not divisible into {} subfiles",
            library.file_size, pda.subfiles
        )));
    }
    let caches = (0..pda.users)
        .map(|k| {
            let mut cache = HashMap::new();
            for f in 0..pda.subfiles {
                if pda.entry(f, k) == Entry::Star {
                    for (i, _) in library.files.iter().enumerate() {
                        cache.insert((i, f), library.subfile(i, f, pda.subfiles).to_vec());
                    }
                }
            }
            cache
        })
        .collect();
    Ok(CacheState { caches })
}

/// Broadcast delivery: for each label s the server sends the XOR of
/// W_{d_k, f} over all positions (f, k) of s.
pub fn deliver_broadcast(
    pda: &Pda,
    library: &FileLibrary,
    demands: &[usize],
) -> Result<TransmissionLog, SimError> {
    check_demands(pda, library.files.len(), demands)?;
    let size = library.file_size / pda.subfiles;
    let positions = pda.positions_by_label();
    let mut labels: Vec<_> = positions.keys().copied().collect();
    labels.sort_unstable();
    let mut broadcast = Vec::with_capacity(labels.len());
    for s in labels {
        let mut payload = vec![0u8; size];
        for &(f, k) in &positions[&s] {
            xor_into(&mut payload, library.subfile(demands[k], f, pda.subfiles));
        }
        broadcast.push(payload);
    }
    Ok(TransmissionLog {
        demands: demands.to_vec(),
        broadcast,
        d2d: Vec::new(),
        d2d_senders: Vec::new(),
    })
}

/// Reassembles the demanded file of one user from its cache and the
/// broadcast log: cached subfiles directly, the rest by XOR-cancelling the
/// other (cached) terms of the matching transmission.
pub fn decode_broadcast(
    user: usize,
    pda: &Pda,
    cache: &CacheState,
    log: &TransmissionLog,
) -> Result<Vec<u8>, SimError> {
    let want = log.demands[user];
    let size = log
        .broadcast
        .first()
        .map(Vec::len)
        .ok_or_else(|| SimError::DecodeFailure("empty transmission log".into()))?;
    let positions = pda.positions_by_label();
    let mut out = Vec::with_capacity(size * pda.subfiles);
    for f in 0..pda.subfiles {
        match pda.entry(f, user) {
            Entry::Star => {
                let sub = cache.caches[user].get(&(want, f)).ok_or_else(|| {
                    SimError::DecodeFailure(format!("user {user} missing cached subfile {f}"))
                })?;
                out.extend_from_slice(sub);
            }
            Entry::Int(s) => {
                let mut sub = log.broadcast[s as usize - 1].clone();
                for &(f2, k2) in &positions[&s] {
                    if (f2, k2) == (f, user) {
                        continue;
                    }
                    let cached =
                        cache.caches[user].get(&(log.demands[k2], f2)).ok_or_else(|| {
                            SimError::DecodeFailure(format!(
                                "user {user} cannot cancel subfile {f2} of user {k2} in label {s}"
                            ))
                        })?;
                    xor_into(&mut sub, cached);
                }
                out.extend_from_slice(&sub);
            }
        }
    }
    Ok(out)
}

/// D2D delivery for a g-regular PDA: for each label s with positions
/// (f_0,k_0)..(f_{g-1},k_{g-1}) in canonical order, each subfile is split
/// into g-1 parts indexed by the other positions, and user k_j transmits
/// the XOR over i != j of part j of W_{d_{k_i}, f_i}, all read from its own
/// cache.
pub fn deliver_d2d(
    pda: &Pda,
    caches: &CacheState,
    n: usize,
    demands: &[usize],
) -> Result<TransmissionLog, SimError> {
    check_demands(pda, n, demands)?;
    let report = validate_pda(pda);
    let g = report
        .regularity
        .ok_or_else(|| SimError::NotRegular("labels occur unevenly".into()))?;
    if g < 2 {
        return Err(SimError::NotRegular(format!("need g >= 2, got {g}")));
    }
    let sub_size = caches
        .caches
        .iter()
        .flat_map(|c| c.values())
        .map(Vec::len)
        .next()
        .ok_or_else(|| SimError::SizeMismatch("all caches are empty".into()))?;
    if sub_size % (g - 1) != 0 {
        return Err(SimError::SizeMismatch(format!(
            "subfile size {sub_size} not divisible into {} parts",
            g - 1
        )));
    }
    let part = sub_size / (g - 1);

    // Part `j` of the subfile at position `i` is slice `j` if j < i, else
    // slice `j - 1` (positions other than i index the g-1 slices in order).
    let slice_of = |i: usize, j: usize| if j < i { j } else { j - 1 };

    let positions = pda.positions_by_label();
    let mut labels: Vec<_> = positions.keys().copied().collect();
    labels.sort_unstable();
    let mut d2d = Vec::with_capacity(labels.len() * g);
    let mut senders = Vec::with_capacity(labels.len() * g);
    for s in labels {
        let pos = &positions[&s];
        for j in 0..g {
            let (_, sender) = pos[j];
            let mut payload = vec![0u8; part];
            for (i, &(f_i, k_i)) in pos.iter().enumerate() {
                if i == j {
                    continue;
                }
                let sub = caches.caches[sender]
                    .get(&(demands[k_i], f_i))
                    .ok_or_else(|| {
                        SimError::SizeMismatch(format!(
                            "user {sender} lacks cached subfile {f_i} of file {} for label {s}",
                            demands[k_i]
                        ))
                    })?;
                let r = slice_of(i, j);
                xor_into(&mut payload, &sub[r * part..(r + 1) * part]);
            }
            d2d.push((s, j, payload));
            senders.push(sender);
        }
    }
    Ok(TransmissionLog {
        demands: demands.to_vec(),
        broadcast: Vec::new(),
        d2d,
        d2d_senders: senders,
    })
}

/// D2D decoding: for its position i in label s, a user collects the g-1
/// payloads sent by the other positions, cancels the terms it has cached,
/// and concatenates the recovered parts.
pub fn decode_d2d(
    user: usize,
    pda: &Pda,
    cache: &CacheState,
    log: &TransmissionLog,
) -> Result<Vec<u8>, SimError> {
    let want = log.demands[user];
    let positions = pda.positions_by_label();
    let by_key: HashMap<(u32, usize), &Vec<u8>> =
        log.d2d.iter().map(|(s, j, p)| ((*s, *j), p)).collect();
    let part = log
        .d2d
        .first()
        .map(|(_, _, p)| p.len())
        .ok_or_else(|| SimError::DecodeFailure("empty transmission log".into()))?;
    let slice_of = |i: usize, j: usize| if j < i { j } else { j - 1 };

    let mut out = Vec::new();
    for f in 0..pda.subfiles {
        match pda.entry(f, user) {
            Entry::Star => {
                let sub = cache.caches[user].get(&(want, f)).ok_or_else(|| {
                    SimError::DecodeFailure(format!("user {user} missing cached subfile {f}"))
                })?;
                out.extend_from_slice(sub);
            }
            Entry::Int(s) => {
                let pos = &positions[&s];
                let g = pos.len();
                let i_self = pos
                    .iter()
                    .position(|&(f2, k2)| (f2, k2) == (f, user))
                    .expect("own position present");
                let mut sub = vec![0u8; part * (g - 1)];
                for j in 0..g {
                    if j == i_self {
                        continue;
                    }
                    let mut piece = by_key
                        .get(&(s, j))
                        .ok_or_else(|| {
                            SimError::DecodeFailure(format!("missing payload ({s}, {j})"))
                        })?
                        .to_vec();
                    for (i, &(f_i, k_i)) in pos.iter().enumerate() {
                        if i == j || i == i_self {
                            continue;
                        }
                        let cached = cache.caches[user]
                            .get(&(log.demands[k_i], f_i))
                            .ok_or_else(|| {
                                SimError::DecodeFailure(format!(
                                    "user {user} cannot cancel label {s} payload {j}"
                                ))
                            })?;
                        let r = slice_of(i, j);
                        xor_into(&mut piece, &cached[r * part..(r + 1) * part]);
                    }
                    let r = slice_of(i_self, j);
                    sub[r * part..(r + 1) * part].copy_from_slice(&piece);
                }
                out.extend_from_slice(&sub);
            }
        }
    }
    Ok(out)
}

/// End-to-end summary of one simulated placement + delivery + decode run.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub mode: String,
    pub params: Option<(u64, u32, u32, u32)>,
    pub users: usize,
    pub subfiles: usize,
    pub transmissions: usize,
    pub regularity: Option<usize>,
    pub measured_rate: Ratio<u64>,
    pub formula_rate: Ratio<u64>,
    pub decoded_ok: bool,
    pub seed: u64,
    pub runtime_ms: u128,
}

impl SimulationReport {
    pub fn to_json(&self) -> Value {
        let r = |x: &Ratio<u64>| *x.numer() as f64 / *x.denom() as f64;
        json!({
            "mode": self.mode,
            "q": self.params.map(|p| p.0),
            "k": self.params.map(|p| p.1),
            "m": self.params.map(|p| p.2),
            "t": self.params.map(|p| p.3),
            "K": self.users,
            "F": self.subfiles,
            "S": self.transmissions,
            "g": self.regularity,
            "measured_rate": r(&self.measured_rate),
            "measured_rate_exact": format!("{}/{}", self.measured_rate.numer(), self.measured_rate.denom()),
            "formula_rate": r(&self.formula_rate),
            "decoded_ok": self.decoded_ok,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
        })
    }
}

/// Runs a full placement + delivery + decode cycle with a seeded library
/// and random demands, and digests every decoded file against the library.
pub fn verify_roundtrip(mode: &str, pda: &Pda, seed: u64) -> Result<SimulationReport, SimError> {
    let started = Instant::now();
    let report = validate_pda(pda);
    if !report.valid() {
        return Err(SimError::SizeMismatch(format!(
            "PDA is invalid: {:?}",
            report.failures
        )));
    }
    let g = report.regularity;
    let split = match mode {
        "broadcast" => 1,
        "d2d" => g.ok_or_else(|| SimError::NotRegular("D2D needs a regular PDA".into()))? - 1,
        other => {
            return Err(SimError::InvalidDemand(format!("unknown mode {other:?}")));
        }
    };
    // Two bytes per smallest coded unit keeps payloads nontrivial.
    let file_size = pda.subfiles * split.max(1) * 2;
    let n = pda.users;
    let library = FileLibrary::generate(n, file_size, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let demands: Vec<usize> = (0..pda.users).map(|_| rng.gen_range(0..n)).collect();

    let caches = place(pda, &library)?;
    let log = match mode {
        "broadcast" => deliver_broadcast(pda, &library, &demands)?,
        _ => deliver_d2d(pda, &caches, n, &demands)?,
    };
    let mut decoded_ok = true;
    for user in 0..pda.users {
        let bytes = match mode {
            "broadcast" => decode_broadcast(user, pda, &caches, &log)?,
            _ => decode_d2d(user, pda, &caches, &log)?,
        };
        if Sha256::digest(&bytes)[..] != Sha256::digest(&library.files[demands[user]])[..] {
            decoded_ok = false;
        }
    }

    let measured_rate = Ratio::new(log.total_bytes() as u64, file_size as u64);
    let s = report.labels as u64;
    let f = pda.subfiles as u64;
    let formula_rate = match mode {
        "broadcast" => Ratio::new(s, f),
        _ => {
            let g = g.unwrap() as u64;
            Ratio::new(g, g - 1) * Ratio::new(s, f)
        }
    };
    Ok(SimulationReport {
        mode: mode.to_string(),
        params: pda.params,
        users: pda.users,
        subfiles: pda.subfiles,
        transmissions: report.labels,
        regularity: g,
        measured_rate,
        formula_rate,
        decoded_ok,
        seed,
        runtime_ms: started.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linegraph::{
        build_geometry, build_line_graph, transmission_cover, CachingLineGraph,
        TransmissionCover,
    };
    use crate::pda::line_graph_to_pda;
    use crate::scheme::{rational_to_f64, scheme_params};

    fn demo_pda() -> Pda {
        let vertices = vec![
            (0, 0),
            (0, 1),
            (2, 0),
            (2, 1),
            (1, 2),
            (1, 3),
            (3, 2),
            (3, 3),
        ];
        let graph = CachingLineGraph::from_vertices(4, 4, vertices).unwrap();
        let vid = |u, f| graph.vertex_id(u, f).unwrap();
        let cover = TransmissionCover {
            cliques: vec![
                vec![vid(0, 0), vid(1, 2)],
                vec![vid(0, 1), vid(1, 3)],
                vec![vid(2, 0), vid(3, 2)],
                vec![vid(2, 1), vid(3, 3)],
            ],
        };
        line_graph_to_pda(&graph, &cover).unwrap()
    }

    #[test]
    fn demo_pda_placement_covers_half() {
        let pda = demo_pda();
        let library = FileLibrary::generate(4, 8, 1);
        let caches = place(&pda, &library).unwrap();
        for user in 0..4 {
            // 2 of 4 subfiles, for each of 4 files, 2 bytes each.
            assert_eq!(caches.cache_bytes(user), 2 * 4 * 2);
        }
    }

    #[test]
    fn demo_pda_broadcast_roundtrip() {
        let pda = demo_pda();
        let report = verify_roundtrip("broadcast", &pda, 3).unwrap();
        assert!(report.decoded_ok);
        assert_eq!(report.transmissions, 4);
        assert_eq!(report.measured_rate, Ratio::new(1, 1));
        assert_eq!(report.measured_rate, report.formula_rate);
    }

    #[test]
    fn demo_pda_d2d_roundtrip() {
        let pda = demo_pda();
        let report = verify_roundtrip("d2d", &pda, 5).unwrap();
        assert!(report.decoded_ok);
        assert_eq!(report.measured_rate, Ratio::new(2, 1));
        assert_eq!(report.measured_rate, report.formula_rate);
    }

    #[test]
    fn constructed_scheme_roundtrips_and_matches_theory() {
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        let graph = build_line_graph(&ctx);
        let cover = transmission_cover(&ctx, &graph).unwrap();
        let pda = line_graph_to_pda(&graph, &cover).unwrap();

        let b = verify_roundtrip("broadcast", &pda, 0).unwrap();
        assert!(b.decoded_ok);
        assert_eq!(b.measured_rate, Ratio::new(8, 1));
        let theory = scheme_params(2, 4, 1, 1).unwrap();
        assert_eq!(rational_to_f64(&theory.rate), 8.0);

        let d = verify_roundtrip("d2d", &pda, 0).unwrap();
        assert!(d.decoded_ok);
        assert_eq!(d.measured_rate, Ratio::new(48, 5)); // 9.6
    }

    #[test]
    fn single_label_pda_sends_one_transmission() {
        // Two users share one label; stars crosswise.
        let pda = Pda::new(
            2,
            2,
            vec![
                vec![Entry::Int(1), Entry::Star],
                vec![Entry::Star, Entry::Int(1)],
            ],
        )
        .unwrap();
        let library = FileLibrary::generate(2, 4, 9);
        let caches = place(&pda, &library).unwrap();
        let log = deliver_broadcast(&pda, &library, &[1, 0]).unwrap();
        assert_eq!(log.broadcast.len(), 1);
        for user in 0..2 {
            let bytes = decode_broadcast(user, &pda, &caches, &log).unwrap();
            assert_eq!(bytes, library.files[log.demands[user]]);
        }
    }

    #[test]
    fn corrupted_log_is_detected() {
        let pda = demo_pda();
        let library = FileLibrary::generate(4, 8, 2);
        let caches = place(&pda, &library).unwrap();
        let mut log = deliver_broadcast(&pda, &library, &[0, 1, 2, 3]).unwrap();
        log.broadcast[0][0] ^= 0xff;
        let mut mismatch = false;
        for user in 0..4 {
            let bytes = decode_broadcast(user, &pda, &caches, &log).unwrap();
            if bytes != library.files[log.demands[user]] {
                mismatch = true;
            }
        }
        assert!(mismatch);
    }

    #[test]
    fn worst_case_demands_still_decode() {
        let pda = demo_pda();
        let library = FileLibrary::generate(4, 8, 11);
        let caches = place(&pda, &library).unwrap();
        let demands = vec![0; 4];
        let log = deliver_broadcast(&pda, &library, &demands).unwrap();
        assert_eq!(log.broadcast.len(), 4);
        for user in 0..4 {
            let bytes = decode_broadcast(user, &pda, &caches, &log).unwrap();
            assert_eq!(bytes, library.files[0]);
        }
        let d2d_log = deliver_d2d(&pda, &caches, 4, &demands).unwrap();
        for user in 0..4 {
            let bytes = decode_d2d(user, &pda, &caches, &d2d_log).unwrap();
            assert_eq!(bytes, library.files[0]);
        }
    }

    #[test]
    fn invalid_demand_and_size_errors() {
        let pda = demo_pda();
        let library = FileLibrary::generate(2, 8, 0);
        assert!(matches!(
            deliver_broadcast(&pda, &library, &[0, 1, 2, 3]),
            Err(SimError::InvalidDemand(_))
        ));
        let odd = FileLibrary::generate(2, 7, 0);
        assert!(matches!(
            place(&pda, &odd),
            Err(SimError::SizeMismatch(_))
        ));
    }
}
