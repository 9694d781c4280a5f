//! Iterative Tarjan strongly-connected-component decomposition.

/// SCCs of the subgraph induced by the nodes with `active[v]`, in reverse
/// topological order.
pub fn tarjan<S: AsRef<[usize]>>(succ: &[S], active: &[bool]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if !active[root] || index[root] != UNSEEN {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = frames.last() {
            let edges = succ[v].as_ref();
            if pos < edges.len() {
                let w = edges[pos];
                frames.last_mut().unwrap().1 += 1;
                if !active[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Whether a component contains at least one edge (of the induced subgraph).
pub fn is_nontrivial<S: AsRef<[usize]>>(succ: &[S], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].as_ref().contains(&comp[0])
}
