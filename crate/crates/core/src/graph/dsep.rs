use std::collections::VecDeque;

use super::{Dag, NodeId};
use crate::error::{invalid, Result};

/// Tests whether `x` and `y` are d-separated by `z` in `g`.
///
/// Reachability ("Bayes-ball") formulation: a breadth-first traversal over
/// (node, direction-of-arrival) states that only follows active trails
/// given `z`. Linear in the size of the graph.
pub fn d_separated(g: &Dag, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<bool> {
    let n = g.n_nodes();
    if x >= n || y >= n || z.iter().any(|&v| v >= n) {
        return Err(invalid("node id out of range"));
    }
    if x == y {
        return Err(invalid("x and y must differ"));
    }
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    if in_z[x] || in_z[y] {
        return Err(invalid("x and y must not be in the conditioning set"));
    }

    // nodes that are in z or have a descendant in z
    let mut anc = in_z.clone();
    let mut stack: Vec<NodeId> = z.to_vec();
    while let Some(v) = stack.pop() {
        for &p in g.parents(v) {
            if !anc[p] {
                anc[p] = true;
                stack.push(p);
            }
        }
    }

    // direction: 0 = arrived from a child (moving up), 1 = from a parent
    let mut visited = vec![[false; 2]; n];
    let mut queue = VecDeque::from([(x, 0usize)]);
    while let Some((v, dir)) = queue.pop_front() {
        if std::mem::replace(&mut visited[v][dir], true) {
            continue;
        }
        if v == y && !in_z[v] {
            return Ok(false);
        }
        if dir == 0 {
            if !in_z[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, 0)));
                queue.extend(g.children(v).iter().map(|&c| (c, 1)));
            }
        } else {
            if !in_z[v] {
                queue.extend(g.children(v).iter().map(|&c| (c, 1)));
            }
            if anc[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, 0)));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain() {
        let g = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(d_separated(&g, 0, 2, &[1]).unwrap());
        assert!(!d_separated(&g, 0, 2, &[]).unwrap());
    }

    #[test]
    fn collider() {
        let g = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert!(d_separated(&g, 0, 1, &[]).unwrap());
        assert!(!d_separated(&g, 0, 1, &[2]).unwrap());
    }

    #[test]
    fn descendant_of_collider_opens_path() {
        let g = Dag::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!d_separated(&g, 0, 1, &[3]).unwrap());
    }

    #[test]
    fn argument_errors() {
        let g = Dag::new(3, [(0, 1)]).unwrap();
        assert!(d_separated(&g, 0, 0, &[]).is_err());
        assert!(d_separated(&g, 0, 1, &[1]).is_err());
        assert!(d_separated(&g, 0, 5, &[]).is_err());
    }
}
