use super::{BoundaryCycle, Signature, SurfaceError, Triangulation, TriangulationData};

#[derive(Clone, Copy)]
enum Side {
    Glued(usize),
    Boundary(usize),
}

/// Deterministic default triangulation of `S_g(𝔫)`.
///
/// Starts from the polygon with side word
/// `a₁b₁a₁⁻¹b₁⁻¹ ⋯ a_g b_g a_g⁻¹ b_g⁻¹ ∂₁ c₂∂₂c₂⁻¹ ⋯ c_k∂_k c_k⁻¹`, fan-triangulated
/// from its first corner. Every polygon corner lands on a boundary circle,
/// each carrying one marked point. Boundary `i` then receives `n_i - 3`
/// further points by gluing triangles onto its newest boundary arc.
pub fn canonical_triangulation(sig: &Signature) -> Result<Triangulation, SurfaceError> {
    let g = sig.genus();
    let k = sig.boundary_count();

    let mut word = Vec::new();
    let mut label = 0;
    for _ in 0..g {
        let (a, b) = (label, label + 1);
        label += 2;
        word.extend([
            Side::Glued(a),
            Side::Glued(b),
            Side::Glued(a),
            Side::Glued(b),
        ]);
    }
    word.push(Side::Boundary(0));
    for j in 1..k {
        word.extend([
            Side::Glued(label),
            Side::Boundary(j),
            Side::Glued(label),
        ]);
        label += 1;
    }
    let n = word.len();
    debug_assert!(n >= 4, "signature gate excludes smaller polygons");

    // Fan triangle i = (P0, P_{i+1}, P_{i+2}), half-edges 3i, 3i+1, 3i+2.
    let mut triangles = Vec::with_capacity(n - 2);
    let mut pairing = Vec::new();
    for i in 0..n - 2 {
        triangles.push([3 * i, 3 * i + 1, 3 * i + 2]);
        if i + 1 < n - 2 {
            pairing.push([3 * i + 2, 3 * (i + 1)]);
        }
    }
    // Polygon side p (P_p → P_{p+1}) as a half-edge.
    let side_half_edge = |p: usize| {
        if p == 0 {
            0
        } else if p == n - 1 {
            3 * (n - 3) + 2
        } else {
            3 * (p - 1) + 1
        }
    };
    let mut first_occurrence = vec![None; label];
    let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (p, side) in word.iter().enumerate() {
        match *side {
            Side::Glued(l) => match first_occurrence[l].take() {
                None => first_occurrence[l] = Some(side_half_edge(p)),
                Some(h) => pairing.push([h, side_half_edge(p)]),
            },
            Side::Boundary(j) => boundary[j].push(side_half_edge(p)),
        }
    }

    // Attach a triangle (u', u, p) along boundary half-edge u → u'; its two
    // new sides u → p and p → u' replace the old arc in the boundary cycle.
    for (j, &n_j) in sig.poles().iter().enumerate() {
        for _ in 3..n_j {
            let h = *boundary[j].last().expect("boundary has an arc");
            let base = 3 * triangles.len();
            triangles.push([base, base + 1, base + 2]);
            pairing.push([h, base]);
            let cycle = &mut boundary[j];
            cycle.pop();
            cycle.extend([base + 1, base + 2]);
        }
    }

    pairing.iter_mut().for_each(|p| p.sort_unstable());
    pairing.sort_unstable();
    let boundary = boundary
        .into_iter()
        .enumerate()
        .map(|(component, half_edges)| BoundaryCycle {
            component,
            half_edges,
        })
        .collect();
    Triangulation::new(TriangulationData {
        triangles,
        pairing,
        boundary,
    })
}
