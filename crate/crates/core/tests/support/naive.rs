//! Test-only oracle: generate every labelled r2-regular graph on n vertices
//! and dedup by the minimum upper-triangle code over all n! relabellings.

use std::collections::BTreeSet;

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

pub fn naive_class_count(n: usize, r2: usize, perms: &[Vec<usize>]) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let mut classes: BTreeSet<Vec<bool>> = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if (mask.count_ones() as usize) * 2 != n * r2 {
            continue;
        }
        let mut deg = vec![0; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        if deg.iter().any(|&d| d != r2) {
            continue;
        }
        let code = perms
            .iter()
            .map(|p| pairs.iter().map(|&(i, j)| mask >> index[p[i]][p[j]] & 1 == 1).collect::<Vec<bool>>())
            .min()
            .expect("at least one permutation");
        classes.insert(code);
    }
    classes.len()
}
