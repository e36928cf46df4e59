//! Integer lattice helpers shared by the lattice sums and data windows.

/// All points `j ∈ ℤ^n` with `‖j‖_∞ ≤ radius`, in row-major order (last axis
/// fastest).
pub fn cube_points(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![-radius; dim];
    for _ in 0..total {
        out.push(cur.clone());
        for axis in (0..dim).rev() {
            if cur[axis] < radius {
                cur[axis] += 1;
                break;
            }
            cur[axis] = -radius;
        }
    }
    out
}

/// Nonzero lattice points with `‖j‖_∞ ≤ radius`.
pub fn punctured_cube_points(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    cube_points(dim, radius)
        .into_iter()
        .filter(|j| j.iter().any(|&c| c != 0))
        .collect()
}

/// Number of lattice points with `‖j‖_∞ = s`.
pub fn shell_count(dim: usize, s: u64) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let outer = (2 * s + 1) as f64;
    let inner = (2 * s - 1) as f64;
    outer.powi(dim as i32) - inner.powi(dim as i32)
}

/// Row-major flat index of `j` inside the cube of the given radius.
pub fn cube_index(j: &[i64], radius: i64) -> Option<usize> {
    let side = 2 * radius + 1;
    let mut idx = 0i64;
    for &c in j {
        if c.abs() > radius {
            return None;
        }
        idx = idx * side + (c + radius);
    }
    Some(idx as usize)
}

pub fn sup_norm(j: &[i64]) -> i64 {
    j.iter().map(|c| c.abs()).max().unwrap_or(0)
}

pub fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_enumeration_and_index_agree() {
        for dim in 1..=3 {
            let pts = cube_points(dim, 2);
            assert_eq!(pts.len(), 5usize.pow(dim as u32));
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(cube_index(p, 2), Some(i));
            }
        }
        assert_eq!(cube_index(&[3], 2), None);
    }

    #[test]
    fn shells_partition_the_cube() {
        for dim in 1..=3 {
            let total: f64 = (0..=4).map(|s| shell_count(dim, s)).sum();
            assert_eq!(total, 9f64.powi(dim as i32));
        }
        assert_eq!(punctured_cube_points(2, 1).len(), 8);
    }
}
