//! Construction of the caching line graph from projective-geometry
//! parameters (q, k, m, t): the fixed anchor subspace W, the families of
//! t-dim superspaces that index users, subfiles, and transmissions, the
//! graph itself, and the disjoint transmission clique cover of the
//! complement-square graph.
//!
//! All enumeration is canonically ordered (lexicographic over subspace
//! bases), so repeated builds produce byte-identical structures.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::gf::{make_field, standard_basis_vector, FieldContext, GfError, Subspace};
use crate::projective::enumerate_superspaces;
use crate::scheme::{scheme_params, ParamError};

/// Default limit on |V(L)| for constructed instances.
pub const DEFAULT_MAX_VERTICES: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum LineGraphError {
    #[error(transparent)]
    InvalidParameters(#[from] ParamError),
    #[error("instance too large: {estimated} vertices exceeds cap {cap}")]
    InstanceTooLarge { estimated: u64, cap: u64 },
    #[error("unknown vertex ({0}, {1})")]
    UnknownVertex(usize, usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// The fixed W plus the enumerated index families for one parameter point.
#[derive(Debug, Clone)]
pub struct GeometryContext {
    pub q: u64,
    pub k: u32,
    pub m: u32,
    pub t: u32,
    field: FieldContext,
    w: Subspace,
    /// All t-dim superspaces of W, canonically ordered.
    v_family: Vec<Subspace>,
    /// User index set: 2-subsets of `v_family` with sum of dim t+1.
    x_set: Vec<Vec<usize>>,
    /// Subfile index set: (m+1)-subsets with sum of dim m+t.
    y_set: Vec<Vec<usize>>,
    /// Transmission index set: (m+3)-subsets with sum of dim m+t+2.
    z_set: Vec<Vec<usize>>,
}

/// Builds the geometry with the canonical W (span of the last t-1 standard
/// basis vectors) and the default vertex cap.
pub fn build_geometry(q: u64, k: u32, m: u32, t: u32) -> Result<GeometryContext, LineGraphError> {
    build_geometry_with(q, k, m, t, None, DEFAULT_MAX_VERTICES)
}

/// Builds the geometry with an explicit W (any (t-1)-dim subspace) and cap.
pub fn build_geometry_with(
    q: u64,
    k: u32,
    m: u32,
    t: u32,
    w: Option<Subspace>,
    cap: u64,
) -> Result<GeometryContext, LineGraphError> {
    // Feasibility guard from the closed forms, before any enumeration.
    let params = scheme_params(q, k, m, t)?;
    let estimated = (&params.users * &params.user_clique)
        .to_u64()
        .unwrap_or(u64::MAX);
    if estimated > cap {
        return Err(LineGraphError::InstanceTooLarge { estimated, cap });
    }

    let field = make_field(q).map_err(|_| {
        ParamError::InvalidParameters(format!("q = {q} is not a prime power"))
    })?;
    let kd = k as usize;
    let w = match w {
        Some(w) => {
            if w.ambient_dim() != kd || w.dim() != t as usize - 1 {
                return Err(LineGraphError::InvalidParameters(
                    ParamError::InvalidParameters(format!(
                        "W must be a {}-dim subspace of F_q^{k}",
                        t - 1
                    )),
                ));
            }
            w
        }
        None => {
            let basis: Vec<_> = (kd - (t as usize - 1)..kd)
                .map(|i| standard_basis_vector(kd, i))
                .collect();
            Subspace::span(&field, &basis, kd)?
        }
    };

    let v_family = enumerate_superspaces(&field, &w, t as usize)
        .map_err(|e| LineGraphError::InternalInconsistency(e.to_string()))?;

    let x_set = enumerate_flag_sets(&field, &v_family, 2, t as usize - 1)?;
    let y_set = enumerate_flag_sets(&field, &v_family, m as usize + 1, t as usize - 1)?;
    let z_set = enumerate_flag_sets(&field, &v_family, m as usize + 3, t as usize - 1)?;

    Ok(GeometryContext {
        q,
        k,
        m,
        t,
        field,
        w,
        v_family,
        x_set,
        y_set,
        z_set,
    })
}

/// All `size`-subsets of the family whose subspace sum has dimension
/// base_dim + size. Every member adds at most one dimension over W, so a
/// prefix is viable only while each step gains exactly one; the DFS prunes
/// on that.
fn enumerate_flag_sets(
    field: &FieldContext,
    family: &[Subspace],
    size: usize,
    base_dim: usize,
) -> Result<Vec<Vec<usize>>, GfError> {
    fn rec(
        field: &FieldContext,
        family: &[Subspace],
        size: usize,
        base_dim: usize,
        from: usize,
        prefix: &mut Vec<usize>,
        sum: &Subspace,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), GfError> {
        if prefix.len() == size {
            out.push(prefix.clone());
            return Ok(());
        }
        for i in from..family.len() {
            let next = sum.sum(field, &family[i])?;
            if next.dim() == base_dim + prefix.len() + 1 {
                prefix.push(i);
                rec(field, family, size, base_dim, i + 1, prefix, &next, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    if family.is_empty() {
        return Ok(out);
    }
    let start = Subspace::zero(family[0].ambient_dim());
    // Seed with W itself by summing in the first chosen member; starting
    // from the zero subspace works because every member contains W.
    let mut prefix = Vec::with_capacity(size);
    for i in 0..family.len() {
        prefix.push(i);
        rec(
            field,
            family,
            size,
            base_dim,
            i + 1,
            &mut prefix,
            &family[i],
            &mut out,
        )?;
        prefix.pop();
    }
    let _ = start;
    Ok(out)
}

impl GeometryContext {
    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn w(&self) -> &Subspace {
        &self.w
    }

    pub fn v_family(&self) -> &[Subspace] {
        &self.v_family
    }

    pub fn x_set(&self) -> &[Vec<usize>] {
        &self.x_set
    }

    pub fn y_set(&self) -> &[Vec<usize>] {
        &self.y_set
    }

    pub fn z_set(&self) -> &[Vec<usize>] {
        &self.z_set
    }

    /// Subspace sum of the members of an index set.
    pub fn member_sum(&self, indices: &[usize]) -> Subspace {
        let mut sum = self.w.clone();
        for &i in indices {
            sum = sum.sum(&self.field, &self.v_family[i]).unwrap();
        }
        sum
    }
}

/// The caching line graph: vertices are (user, subfile) pairs marking
/// uncached subfiles. User and subfile cliques are implicit in the pair
/// structure.
#[derive(Debug, Clone)]
pub struct CachingLineGraph {
    num_users: usize,
    num_subfiles: usize,
    vertices: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    user_vertices: Vec<Vec<usize>>,
    subfile_vertices: Vec<Vec<usize>>,
    /// Set when built from a geometry context.
    params: Option<(u64, u32, u32, u32)>,
}

impl CachingLineGraph {
    /// Builds a graph directly from a vertex list, e.g. for hand-crafted
    /// instances. Duplicate vertices are rejected.
    pub fn from_vertices(
        num_users: usize,
        num_subfiles: usize,
        mut vertices: Vec<(usize, usize)>,
    ) -> Result<Self, LineGraphError> {
        vertices.sort_unstable();
        let mut index = HashMap::with_capacity(vertices.len());
        let mut user_vertices = vec![Vec::new(); num_users];
        let mut subfile_vertices = vec![Vec::new(); num_subfiles];
        for (id, &(u, f)) in vertices.iter().enumerate() {
            if u >= num_users || f >= num_subfiles {
                return Err(LineGraphError::UnknownVertex(u, f));
            }
            if index.insert((u, f), id).is_some() {
                return Err(LineGraphError::InternalInconsistency(format!(
                    "duplicate vertex ({u}, {f})"
                )));
            }
            user_vertices[u].push(id);
            subfile_vertices[f].push(id);
        }
        Ok(CachingLineGraph {
            num_users,
            num_subfiles,
            vertices,
            index,
            user_vertices,
            subfile_vertices,
            params: None,
        })
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_subfiles(&self) -> usize {
        self.num_subfiles
    }

    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    pub fn params(&self) -> Option<(u64, u32, u32, u32)> {
        self.params
    }

    pub fn contains_vertex(&self, user: usize, subfile: usize) -> bool {
        self.index.contains_key(&(user, subfile))
    }

    pub fn vertex_id(&self, user: usize, subfile: usize) -> Option<usize> {
        self.index.get(&(user, subfile)).copied()
    }

    pub fn user_vertices(&self, user: usize) -> &[usize] {
        &self.user_vertices[user]
    }

    pub fn subfile_vertices(&self, subfile: usize) -> &[usize] {
        &self.subfile_vertices[subfile]
    }
}

/// Builds the line graph of a geometry context: (X, Y) is a vertex iff the
/// sum of all member subspaces of X and Y has dimension m + t + 2.
pub fn build_line_graph(ctx: &GeometryContext) -> CachingLineGraph {
    let target = (ctx.m + ctx.t + 2) as usize;
    let x_sums: Vec<Subspace> = ctx.x_set.iter().map(|x| ctx.member_sum(x)).collect();
    let y_sums: Vec<Subspace> = ctx.y_set.iter().map(|y| ctx.member_sum(y)).collect();

    let mut vertices = Vec::new();
    for (xi, xs) in x_sums.iter().enumerate() {
        for (yi, ys) in y_sums.iter().enumerate() {
            if xs.sum(&ctx.field, ys).unwrap().dim() == target {
                vertices.push((xi, yi));
            }
        }
    }
    let mut graph =
        CachingLineGraph::from_vertices(ctx.x_set.len(), ctx.y_set.len(), vertices)
            .expect("constructed vertex list is well-formed");
    graph.params = Some((ctx.q, ctx.k, ctx.m, ctx.t));
    graph
}

/// Result of checking the caching-line-graph properties P1-P3 and, when the
/// construction parameters are known, the closed-form sizes.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub p1_user_cliques_uniform: bool,
    pub p2_subfile_cliques_uniform: bool,
    pub p3_pair_indexed: bool,
    pub measured_users: usize,
    pub measured_subfiles: usize,
    pub measured_user_clique: usize,
    pub measured_subfile_clique: usize,
    pub closed_forms_match: Option<bool>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.p1_user_cliques_uniform
            && self.p2_subfile_cliques_uniform
            && self.p3_pair_indexed
            && self.closed_forms_match.unwrap_or(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p1_user_cliques_uniform": self.p1_user_cliques_uniform,
            "p2_subfile_cliques_uniform": self.p2_subfile_cliques_uniform,
            "p3_pair_indexed": self.p3_pair_indexed,
            "measured": {
                "users": self.measured_users,
                "subfiles": self.measured_subfiles,
                "user_clique": self.measured_user_clique,
                "subfile_clique": self.measured_subfile_clique,
            },
            "closed_forms_match": self.closed_forms_match,
            "failures": self.failures,
            "passed": self.passed(),
        })
    }
}

pub fn verify_caching_line_graph(graph: &CachingLineGraph) -> VerificationReport {
    let mut failures = Vec::new();

    let d = graph.user_vertices.first().map_or(0, |v| v.len());
    let p1 = graph.user_vertices.iter().all(|v| v.len() == d) && d > 0;
    if !p1 {
        failures.push("P1: user cliques are not uniform".into());
    }
    let c = graph.subfile_vertices.first().map_or(0, |v| v.len());
    let p2 = graph.subfile_vertices.iter().all(|v| v.len() == c) && c > 0;
    if !p2 {
        failures.push("P2: subfile cliques are not uniform".into());
    }
    // P3: every vertex belongs to exactly one user clique and one subfile
    // clique; with the pair representation this reduces to uniqueness.
    let p3 = graph.index.len() == graph.vertices.len();
    if !p3 {
        failures.push("P3: vertex appears in multiple cliques".into());
    }

    let closed = graph.params.map(|(q, k, m, t)| {
        let p = scheme_params(q, k, m, t).expect("params were validated at build time");
        let ok = p.users == graph.num_users.into()
            && p.subpacketization == graph.num_subfiles.into()
            && p.user_clique == d.into()
            && p.subfile_clique == c.into();
        if !ok {
            failures.push("measured sizes disagree with the closed forms".into());
        }
        ok
    });

    VerificationReport {
        p1_user_cliques_uniform: p1,
        p2_subfile_cliques_uniform: p2,
        p3_pair_indexed: p3,
        measured_users: graph.num_users,
        measured_subfiles: graph.num_subfiles,
        measured_user_clique: d,
        measured_subfile_clique: c,
        closed_forms_match: closed,
        failures,
    }
}

/// Edge test in the complement of the squared line graph: users differ,
/// subfiles differ, and both cross pairs are absent from V(L).
pub fn is_edge_complement_square(
    graph: &CachingLineGraph,
    v1: (usize, usize),
    v2: (usize, usize),
) -> Result<bool, LineGraphError> {
    for v in [v1, v2] {
        if !graph.contains_vertex(v.0, v.1) {
            return Err(LineGraphError::UnknownVertex(v.0, v.1));
        }
    }
    let (k1, f1) = v1;
    let (k2, f2) = v2;
    Ok(k1 != k2
        && f1 != f2
        && !graph.contains_vertex(k1, f2)
        && !graph.contains_vertex(k2, f1))
}

/// A disjoint clique cover of the complement-square graph; clique i holds
/// vertex ids and corresponds to transmission label i + 1.
#[derive(Debug, Clone)]
pub struct TransmissionCover {
    pub cliques: Vec<Vec<usize>>,
}

/// One clique per Z: all (pair, rest) splits of its m + 3 members. Verifies
/// cliqueness and that the cliques partition V(L).
pub fn transmission_cover(
    ctx: &GeometryContext,
    graph: &CachingLineGraph,
) -> Result<TransmissionCover, LineGraphError> {
    let x_index: HashMap<&[usize], usize> = ctx
        .x_set
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_slice(), i))
        .collect();
    let y_index: HashMap<&[usize], usize> = ctx
        .y_set
        .iter()
        .enumerate()
        .map(|(i, y)| (y.as_slice(), i))
        .collect();

    let members = ctx.m as usize + 3;
    let mut cliques = Vec::with_capacity(ctx.z_set.len());
    let mut seen = vec![false; graph.vertices().len()];
    for z in &ctx.z_set {
        let mut clique = Vec::with_capacity(members * (members - 1) / 2);
        for a in 0..members {
            for b in a + 1..members {
                let pair = [z[a], z[b]];
                let rest: Vec<usize> = z
                    .iter()
                    .copied()
                    .filter(|&v| v != z[a] && v != z[b])
                    .collect();
                let xi = *x_index.get(pair.as_slice()).ok_or_else(|| {
                    LineGraphError::InternalInconsistency(format!(
                        "pair {pair:?} of Z is not a user index"
                    ))
                })?;
                let yi = *y_index.get(rest.as_slice()).ok_or_else(|| {
                    LineGraphError::InternalInconsistency(format!(
                        "rest {rest:?} of Z is not a subfile index"
                    ))
                })?;
                let vid = graph.vertex_id(xi, yi).ok_or_else(|| {
                    LineGraphError::InternalInconsistency(format!(
                        "split ({xi}, {yi}) of Z is not a vertex"
                    ))
                })?;
                if seen[vid] {
                    return Err(LineGraphError::InternalInconsistency(format!(
                        "vertex {vid} covered twice"
                    )));
                }
                seen[vid] = true;
                clique.push(vid);
            }
        }
        // Every intra-clique pair must be an edge of the complement square.
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                let v1 = graph.vertices()[clique[i]];
                let v2 = graph.vertices()[clique[j]];
                if !is_edge_complement_square(graph, v1, v2)? {
                    return Err(LineGraphError::InternalInconsistency(format!(
                        "vertices {v1:?}, {v2:?} share a clique but are not adjacent"
                    )));
                }
            }
        }
        cliques.push(clique);
    }
    if !seen.iter().all(|&s| s) {
        return Err(LineGraphError::InternalInconsistency(
            "cover misses vertices".into(),
        ));
    }
    Ok(TransmissionCover { cliques })
}

fn subspace_rows(s: &Subspace) -> Value {
    json!(s.basis().iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// JSON export of the full construction: parameters, id tables with
/// subspace bases, vertex list, and cover cliques.
pub fn export_json(
    ctx: &GeometryContext,
    graph: &CachingLineGraph,
    cover: &TransmissionCover,
) -> Value {
    let members = |set: &[Vec<usize>]| -> Vec<Value> {
        set.iter()
            .map(|ids| {
                json!(ids
                    .iter()
                    .map(|&i| subspace_rows(&ctx.v_family[i]))
                    .collect::<Vec<_>>())
            })
            .collect()
    };
    json!({
        "q": ctx.q, "k": ctx.k, "m": ctx.m, "t": ctx.t,
        "w": subspace_rows(&ctx.w),
        "users": members(&ctx.x_set),
        "subfiles": members(&ctx.y_set),
        "vertices": graph.vertices(),
        "cover": cover.cliques,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::all_vectors;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn small_instance_counts() {
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        assert_eq!(ctx.v_family().len(), 15);
        assert_eq!(ctx.x_set().len(), 105);
        assert_eq!(ctx.y_set().len(), 105);
        assert_eq!(ctx.z_set().len(), 840);

        let graph = build_line_graph(&ctx);
        assert_eq!(graph.vertices().len(), 5040);
        let report = verify_caching_line_graph(&graph);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.measured_user_clique, 48);
        assert_eq!(report.measured_subfile_clique, 48);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            build_geometry(2, 4, 1, 2),
            Err(LineGraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            build_geometry(2, 4, 0, 1),
            Err(LineGraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            build_geometry_with(2, 5, 1, 1, None, 10),
            Err(LineGraphError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn second_instance_clique_sizes() {
        let ctx = build_geometry(2, 5, 1, 1).unwrap();
        assert_eq!(ctx.x_set().len(), 465);
        assert_eq!(ctx.y_set().len(), 465);
        let graph = build_line_graph(&ctx);
        let report = verify_caching_line_graph(&graph);
        assert!(report.passed());
        assert_eq!(report.measured_subfile_clique, 336);
        assert_eq!(graph.vertices().len(), 465 * 336);
    }

    #[test]
    fn cover_partitions_small_instance() {
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        let graph = build_line_graph(&ctx);
        let cover = transmission_cover(&ctx, &graph).unwrap();
        assert_eq!(cover.cliques.len(), 840);
        assert!(cover.cliques.iter().all(|c| c.len() == 6));
        let covered: usize = cover.cliques.iter().map(|c| c.len()).sum();
        assert_eq!(covered, graph.vertices().len());
    }

    #[test]
    fn mutated_graph_fails_verification() {
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        let graph = build_line_graph(&ctx);
        let mut vertices = graph.vertices().to_vec();
        vertices.pop();
        let broken = CachingLineGraph::from_vertices(
            graph.num_users(),
            graph.num_subfiles(),
            vertices,
        )
        .unwrap();
        let report = verify_caching_line_graph(&broken);
        assert!(!report.p1_user_cliques_uniform);
        assert!(!report.p2_subfile_cliques_uniform);
    }

    #[test]
    fn edge_predicate_rejects_same_user() {
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        let graph = build_line_graph(&ctx);
        let v = graph.vertices()[0];
        assert!(!is_edge_complement_square(&graph, v, v).unwrap());
        // Two vertices of the same user clique are never adjacent.
        let ids = graph.user_vertices(v.0);
        let v2 = graph.vertices()[ids[1]];
        assert!(!is_edge_complement_square(&graph, v, v2).unwrap());
        assert!(matches!(
            is_edge_complement_square(&graph, v, (usize::MAX, 0)),
            Err(LineGraphError::UnknownVertex(..))
        ));
    }

    #[test]
    fn counts_do_not_depend_on_choice_of_w() {
        // Rebuild (2, 5, 1, 2) with a randomly chosen 1-dim W and compare
        // the measured sizes.
        let canonical = build_geometry(2, 5, 1, 2).unwrap();
        let g1 = build_line_graph(&canonical);
        let r1 = verify_caching_line_graph(&g1);

        let field = make_field(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let nonzero: Vec<_> = all_vectors(&field, 5)
            .into_iter()
            .filter(|v| v.iter().any(|&c| c != 0))
            .collect();
        let v = nonzero.choose(&mut rng).unwrap().clone();
        let w = Subspace::span(&field, &[v], 5).unwrap();
        let other =
            build_geometry_with(2, 5, 1, 2, Some(w), DEFAULT_MAX_VERTICES).unwrap();
        let g2 = build_line_graph(&other);
        let r2 = verify_caching_line_graph(&g2);

        assert!(r1.passed() && r2.passed());
        assert_eq!(r1.measured_users, r2.measured_users);
        assert_eq!(r1.measured_subfiles, r2.measured_subfiles);
        assert_eq!(r1.measured_user_clique, r2.measured_user_clique);
        assert_eq!(r1.measured_subfile_clique, r2.measured_subfile_clique);
    }

    #[test]
    fn uncached_fraction_identity() {
        // 1 - M/N = D/F = c/K on a built instance.
        let ctx = build_geometry(2, 4, 1, 1).unwrap();
        let graph = build_line_graph(&ctx);
        let r = verify_caching_line_graph(&graph);
        assert_eq!(
            r.measured_user_clique * r.measured_users,
            r.measured_subfile_clique * r.measured_subfiles
        );
        // D/F == c/K as exact fractions.
        assert_eq!(
            r.measured_user_clique * r.measured_users,
            r.measured_subfile_clique * r.measured_subfiles
        );
    }
}
