//! Finite quivers and paths.

use std::cmp::Ordering;
use std::fmt;

/// A finite quiver: ordered vertices and arrows. The declaration order fixes
/// every index convention downstream, so two runs over the same input produce
/// identical tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrow_names: Vec<String>,
    arrow_source: Vec<usize>,
    arrow_target: Vec<usize>,
}

impl Quiver {
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
    ) -> Result<Quiver, String> {
        let mut q = Quiver {
            vertex_names: Vec::new(),
            arrow_names: Vec::new(),
            arrow_source: Vec::new(),
            arrow_target: Vec::new(),
        };
        for v in vertices {
            if q.vertex_names.contains(&v) {
                return Err(format!("duplicate vertex `{v}`"));
            }
            q.vertex_names.push(v);
        }
        for (name, s, t) in arrows {
            if q.arrow_names.contains(&name) || q.vertex_names.contains(&name) {
                return Err(format!("duplicate name `{name}`"));
            }
            if s >= q.vertex_names.len() || t >= q.vertex_names.len() {
                return Err(format!("arrow `{name}` references unknown vertex"));
            }
            q.arrow_names.push(name);
            q.arrow_source.push(s);
            q.arrow_target.push(t);
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrow_names[a]
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrow_source[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrow_target[a]
    }

    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn find_arrow(&self, name: &str) -> Option<usize> {
        self.arrow_names.iter().position(|n| n == name)
    }
}

/// A path in a quiver: consecutive arrows read left to right, or a lone
/// vertex (the length-zero path). Endpoints are stored so that composition
/// never needs the quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    origin: usize,
    terminal: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Path {
        Path {
            origin: v,
            terminal: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Path {
        Path {
            origin: q.source(a),
            terminal: q.target(a),
            arrows: vec![a],
        }
    }

    /// Builds a path from an arrow sequence; `None` when consecutive arrows
    /// do not compose. Empty sequences are rejected (use [`Path::vertex`]).
    pub fn from_arrows(q: &Quiver, arrows: &[usize]) -> Option<Path> {
        let (first, rest) = arrows.split_first()?;
        let mut at = q.target(*first);
        for a in rest {
            if q.source(*a) != at {
                return None;
            }
            at = q.target(*a);
        }
        Some(Path {
            origin: q.source(*first),
            terminal: at,
            arrows: arrows.to_vec(),
        })
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    /// Concatenation; `None` marks the zero product (endpoint mismatch).
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.terminal != other.origin {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            origin: self.origin,
            terminal: other.terminal,
            arrows,
        })
    }

    /// The subpath of `len` arrows starting at arrow position `start`.
    pub fn subpath(&self, q: &Quiver, start: usize, len: usize) -> Path {
        if len == 0 {
            let v = if start < self.arrows.len() {
                q.source(self.arrows[start])
            } else {
                self.terminal
            };
            return Path::vertex(v);
        }
        Path::from_arrows(q, &self.arrows[start..start + len])
            .expect("subpath of a valid path is valid")
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertex_name(self.origin))
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrow_name(a))
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

// Canonical order: length, then lexicographic by arrow ids; vertices are
// separated by origin. This order pins every serialized table.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.origin.cmp(&other.origin))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e_[{}]", self.origin)
        } else {
            let ids: Vec<String> = self.arrows.iter().map(|a| a.to_string()).collect();
            write!(f, "[{}]", ids.join("*"))
        }
    }
}
