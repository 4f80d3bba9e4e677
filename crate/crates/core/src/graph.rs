//! Simple graphs as graph states, with Pauli measurements expressed as local
//! complementations and vertex deletions.
//!
//! A measurement leaves local Clifford corrections on the surviving
//! vertices. Each vertex keeps a frame recording which graph-state Pauli a
//! physical X or Z measurement on it now corresponds to, so later
//! measurements are taken in the right basis.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Conjugation by `sqrt(±iZ)`.
    fn swap_xy(self) -> Self {
        match self {
            Pauli::X => Pauli::Y,
            Pauli::Y => Pauli::X,
            Pauli::Z => Pauli::Z,
        }
    }

    /// Conjugation by `sqrt(±iY)`.
    fn swap_xz(self) -> Self {
        match self {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            Pauli::Y => Pauli::Y,
        }
    }
}

/// Graph-state Paulis that physical X and Z measurements map to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frame {
    x: Pauli,
    z: Pauli,
}

/// Undirected graph on at most 64 vertices; deleted vertices keep their index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<u64>,
    alive: u64,
    frames: Vec<Frame>,
}

impl Graph {
    pub fn from_adjacency(adj: Vec<u64>) -> Self {
        let n = adj.len();
        let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let frames = vec![
            Frame {
                x: Pauli::X,
                z: Pauli::Z
            };
            n
        ];
        Graph { adj, alive, frames }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn alive(&self) -> u64 {
        self.alive
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Toggles every edge inside the neighbourhood of `v`.
    pub fn local_complement(&mut self, v: usize) {
        let nb = self.adj[v];
        let mut rest = nb;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.adj[a] ^= nb & !(1u64 << a);
        }
    }

    pub fn delete(&mut self, v: usize) {
        let mut nb = self.adj[v];
        while nb != 0 {
            let a = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            self.adj[a] &= !(1u64 << v);
        }
        self.adj[v] = 0;
        self.alive &= !(1u64 << v);
    }

    fn conjugate(&mut self, v: usize, f: fn(Pauli) -> Pauli) {
        let fr = &mut self.frames[v];
        fr.x = f(fr.x);
        fr.z = f(fr.z);
    }

    /// Measures the graph-state Pauli `p` on `v` and removes the vertex.
    /// Z deletes `v`. Y applies `τ_v` first and leaves `sqrt(iZ)` on the
    /// neighbours. X with smallest neighbour `b` applies `τ_b τ_v τ_b` and
    /// leaves `sqrt(iY)` on `b`. Pauli corrections do not affect frames.
    pub fn measure_graph_pauli(&mut self, v: usize, p: Pauli) {
        let nb = self.adj[v];
        match p {
            Pauli::Z => {}
            Pauli::Y => {
                self.local_complement(v);
                let mut rest = nb;
                while rest != 0 {
                    let u = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    self.conjugate(u, Pauli::swap_xy);
                }
            }
            Pauli::X => {
                if nb != 0 {
                    let b = nb.trailing_zeros() as usize;
                    self.local_complement(b);
                    self.local_complement(v);
                    self.local_complement(b);
                    self.conjugate(b, Pauli::swap_xz);
                }
            }
        }
        self.delete(v);
    }

    /// Physical Z measurement on qubit `v`.
    pub fn measure_z(&mut self, v: usize) {
        let p = self.frames[v].z;
        self.measure_graph_pauli(v, p);
    }

    /// Physical X measurement on qubit `v`.
    pub fn measure_x(&mut self, v: usize) {
        let p = self.frames[v].x;
        self.measure_graph_pauli(v, p);
    }

    /// Connected components of the surviving vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = !self.alive;
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 0u64;
            let mut frontier = 1u64 << start;
            while frontier != 0 {
                comp |= frontier;
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let a = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[a];
                }
                frontier = next & !comp;
            }
            seen |= comp;
            out.push((0..self.n()).filter(|i| comp >> i & 1 == 1).collect());
        }
        out
    }

    /// Largest component among survivors; 0 when none has an edge.
    pub fn entanglement_order(&self) -> usize {
        let max = self.components().iter().map(Vec::len).max().unwrap_or(0);
        if max <= 1 {
            0
        } else {
            max
        }
    }
}
