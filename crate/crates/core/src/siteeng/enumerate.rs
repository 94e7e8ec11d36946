//! Exhaustive generation of small finite categories up to isomorphism.
//!
//! For each hom-count matrix (canonical under object relabelling) the
//! composition table is filled cell by cell with incremental associativity
//! checks. Isomorphic copies are cut by requiring the table to be
//! lexicographically least among its relabellings; squares of endomorphisms
//! are filled first, so after that prefix only automorphisms of the squaring
//! map remain in play.

use super::FinCategory;

/// Hom-count matrices on `n` objects with at most `max_morphisms` morphisms,
/// one per orbit under object relabelling, skipping those where a composable
/// pair has nowhere to land.
pub fn hom_matrices(n: usize, max_morphisms: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut h = vec![vec![0usize; n]; n];
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    fill_matrix(&cells, 0, max_morphisms, &mut h, &mut out);
    out
}

fn fill_matrix(
    cells: &[(usize, usize)],
    k: usize,
    budget: usize,
    h: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let n = h.len();
    if k == cells.len() {
        let closed = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|l| h[i][j] == 0 || h[j][l] == 0 || h[i][l] > 0))
        });
        if closed && is_canonical(h) {
            out.push(h.clone());
        }
        return;
    }
    let (i, j) = cells[k];
    let lo = usize::from(i == j);
    // reserve one identity for every later diagonal cell
    let reserved = cells[k + 1..].iter().filter(|(a, b)| a == b).count();
    for v in lo..=budget.saturating_sub(reserved) {
        h[i][j] = v;
        fill_matrix(cells, k + 1, budget - v, h, out);
    }
    h[i][j] = 0;
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            go(i + 1, p, out);
            p.swap(i, j);
        }
    }
    let mut out = Vec::new();
    go(0, &mut (0..n).collect(), &mut out);
    out
}

fn flatten_perm(h: &[Vec<usize>], s: &[usize]) -> Vec<usize> {
    let n = h.len();
    (0..n).flat_map(|i| (0..n).map(move |j| h[s[i]][s[j]])).collect()
}

fn is_canonical(h: &[Vec<usize>]) -> bool {
    let n = h.len();
    let own = flatten_perm(h, &(0..n).collect::<Vec<_>>());
    permutations(n).iter().all(|s| flatten_perm(h, s) <= own)
}

struct Search<'a> {
    m: usize,
    table: Vec<i16>,
    composable: Vec<bool>,
    cells: Vec<(usize, usize)>,
    cell_pos: Vec<usize>,
    domains: Vec<Vec<i16>>,
    perms: Vec<Vec<usize>>,
    invs: Vec<Vec<usize>>,
    emit: &'a mut dyn FnMut(&[i16]),
}

impl Search<'_> {
    #[inline]
    fn at(&self, g: usize, f: usize) -> i16 {
        self.table[g * self.m + f]
    }

    #[inline]
    fn triple_ok(&self, x: usize, y: usize, z: usize) -> bool {
        let xy = self.at(x, y);
        let yz = self.at(y, z);
        if xy < 0 || yz < 0 {
            return true;
        }
        let l = self.at(xy as usize, z);
        let r = self.at(x, yz as usize);
        l < 0 || r < 0 || l == r
    }

    fn associative_at(&self, g: usize, f: usize) -> bool {
        let m = self.m;
        for z in 0..m {
            if self.composable[f * m + z] && !self.triple_ok(g, f, z) {
                return false;
            }
        }
        for x in 0..m {
            if self.composable[x * m + g] && !self.triple_ok(x, g, f) {
                return false;
            }
        }
        for u in 0..m {
            for v in 0..m {
                if self.at(u, v) == g as i16 && !self.triple_ok(u, v, f) {
                    return false;
                }
                if self.at(u, v) == f as i16 && !self.triple_ok(g, u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Advance every live relabelling along the filled prefix. `None` means
    /// some relabelling gives a smaller table.
    fn lex_filter(&self, depth: usize, live: &[(u32, u32)]) -> Option<Vec<(u32, u32)>> {
        let m = self.m;
        let mut out = Vec::with_capacity(live.len());
        'perm: for &(pi, pos0) in live {
            let p = &self.perms[pi as usize];
            let inv = &self.invs[pi as usize];
            let mut pos = pos0 as usize;
            while pos <= depth {
                let (a, b) = self.cells[pos];
                let (sa, sb) = (inv[a], inv[b]);
                if self.cell_pos[sa * m + sb] > depth {
                    break;
                }
                let mine = self.at(a, b);
                let theirs = p[self.at(sa, sb) as usize] as i16;
                if theirs < mine {
                    return None;
                }
                if theirs > mine {
                    continue 'perm;
                }
                pos += 1;
            }
            out.push((pi, pos as u32));
        }
        Some(out)
    }

    fn run(&mut self, depth: usize, live: &[(u32, u32)]) {
        if depth == self.cells.len() {
            (self.emit)(&self.table);
            return;
        }
        let (g, f) = self.cells[depth];
        for k in 0..self.domains[depth].len() {
            let v = self.domains[depth][k];
            self.table[g * self.m + f] = v;
            if self.associative_at(g, f) {
                if let Some(next) = self.lex_filter(depth, live) {
                    self.run(depth + 1, &next);
                }
            }
        }
        self.table[g * self.m + f] = -1;
    }
}

/// Layout of morphisms for a hom matrix: hom-sets in row-major order, the
/// identity first in each endomorphism set.
struct Layout {
    src: Vec<usize>,
    dst: Vec<usize>,
    identity: Vec<usize>,
    hom: Vec<Vec<Vec<usize>>>,
}

fn layout(h: &[Vec<usize>]) -> Layout {
    let n = h.len();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut identity = vec![0; n];
    let mut hom = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..h[i][j] {
                if i == j && k == 0 {
                    identity[i] = src.len();
                }
                hom[i][j].push(src.len());
                src.push(i);
                dst.push(j);
            }
        }
    }
    Layout { src, dst, identity, hom }
}

/// Relabellings preserving the layout: an object permutation fixing `h`
/// combined with arbitrary bijections between matching hom-sets.
fn symmetry_group(h: &[Vec<usize>], lay: &Layout) -> Vec<Vec<usize>> {
    let n = h.len();
    let m = lay.src.len();
    let mut out = Vec::new();
    for s in permutations(n) {
        if (0..n).any(|i| (0..n).any(|j| h[s[i]][s[j]] != h[i][j])) {
            continue;
        }
        let mut partial: Vec<Vec<usize>> = vec![vec![usize::MAX; m]];
        for i in 0..n {
            for j in 0..n {
                let from: Vec<usize> =
                    lay.hom[i][j].iter().copied().filter(|&f| f != lay.identity[i] || i != j).collect();
                let to: Vec<usize> = lay.hom[s[i]][s[j]]
                    .iter()
                    .copied()
                    .filter(|&f| f != lay.identity[s[i]] || i != j)
                    .collect();
                if i == j {
                    for p in partial.iter_mut() {
                        p[lay.identity[i]] = lay.identity[s[i]];
                    }
                }
                let mut next = Vec::new();
                for p in &partial {
                    for b in permutations(from.len()) {
                        let mut q = p.clone();
                        for (k, &f) in from.iter().enumerate() {
                            q[f] = to[b[k]];
                        }
                        next.push(q);
                    }
                }
                partial = next;
            }
        }
        out.extend(partial);
    }
    out
}

/// Visit every category with the given hom-count matrix, once per
/// isomorphism class. Returns the number visited.
pub fn for_each_with_matrix(h: &[Vec<usize>], visit: &mut dyn FnMut(&FinCategory)) -> u64 {
    let n = h.len();
    let lay = layout(h);
    let m = lay.src.len();
    let is_id = |f: usize| lay.identity[lay.src[f]] == f;
    let mut table = vec![-1i16; m * m];
    let mut composable = vec![false; m * m];
    for g in 0..m {
        for f in 0..m {
            if lay.dst[f] == lay.src[g] {
                composable[g * m + f] = true;
                if is_id(g) {
                    table[g * m + f] = f as i16;
                } else if is_id(f) {
                    table[g * m + f] = g as i16;
                }
            }
        }
    }
    let free = |g: usize, f: usize| composable[g * m + f] && !is_id(g) && !is_id(f);
    let mut cells: Vec<(usize, usize)> = (0..m).filter(|&f| free(f, f)).map(|f| (f, f)).collect();
    for g in 0..m {
        for f in 0..m {
            if g != f && free(g, f) {
                cells.push((g, f));
            }
        }
    }
    let mut cell_pos = vec![usize::MAX; m * m];
    for (k, &(g, f)) in cells.iter().enumerate() {
        cell_pos[g * m + f] = k;
    }
    let domains: Vec<Vec<i16>> = cells
        .iter()
        .map(|&(g, f)| lay.hom[lay.src[f]][lay.dst[g]].iter().map(|&x| x as i16).collect())
        .collect();
    let perms = symmetry_group(h, &lay);
    let invs: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut q = vec![0; m];
            for (i, &x) in p.iter().enumerate() {
                q[x] = i;
            }
            q
        })
        .collect();
    let identity_perm: Vec<usize> = (0..m).collect();
    let live: Vec<(u32, u32)> = (0..perms.len() as u32)
        .filter(|&i| perms[i as usize] != identity_perm)
        .map(|i| (i, 0))
        .collect();

    let objects: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let names: Vec<String> = (0..m)
        .map(|f| if is_id(f) { format!("1{}", objects[lay.src[f]]) } else { format!("f{f}") })
        .collect();
    let mut count = 0u64;
    let mut emit = |t: &[i16]| {
        let morphisms = (0..m).map(|f| (names[f].clone(), lay.src[f], lay.dst[f])).collect();
        let cat = FinCategory::from_parts(objects.clone(), morphisms, lay.identity.clone(), |g, f| {
            Some(t[g * m + f] as usize)
        })
        .expect("generated table is a category");
        count += 1;
        visit(&cat);
    };
    let mut search = Search {
        m,
        table,
        composable,
        cells,
        cell_pos,
        domains,
        perms,
        invs,
        emit: &mut emit,
    };
    search.run(0, &live);
    count
}

/// Visit every category with at most `max_objects` objects and at most
/// `max_morphisms` morphisms, once per isomorphism class.
pub fn for_each_category(
    max_objects: usize,
    max_morphisms: usize,
    mut visit: impl FnMut(&FinCategory),
) -> u64 {
    let mut total = 0;
    for n in 1..=max_objects {
        for h in hom_matrices(n, max_morphisms) {
            total += for_each_with_matrix(&h, &mut visit);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monoid_counts() {
        // numbers of monoids of order 1..6 up to isomorphism
        for (order, want) in [(1, 1), (2, 2), (3, 7), (4, 35), (5, 228), (6, 2237)] {
            assert_eq!(for_each_with_matrix(&[vec![order]], &mut |_| {}), want, "order {order}");
        }
    }

    #[test]
    fn small_multi_object() {
        // two objects, one arrow between them, nothing else
        assert_eq!(for_each_with_matrix(&[vec![1, 1], vec![0, 1]], &mut |_| {}), 1);
        // discrete on two objects
        assert_eq!(for_each_with_matrix(&[vec![1, 0], vec![0, 1]], &mut |_| {}), 1);
        // matrices are canonical: the arrow appears once, not as both a->b and b->a
        let two = hom_matrices(2, 3);
        assert!(two.contains(&vec![vec![1, 1], vec![0, 1]]) ^ two.contains(&vec![vec![1, 0], vec![1, 1]]));
    }
}
