use std::collections::HashMap;

use super::model::{Elem, Model};
use super::ProbeError;
use crate::exact::Q;
use crate::group::HomBasis;

pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// Word-metric ball of a Cayley graph, vertices in breadth-first order.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    pub vertices: Vec<Elem>,
    pub distance: Vec<usize>,
    /// Height of each vertex in Hom coordinates of the model's presentation.
    pub heights: Vec<Vec<Q>>,
    /// Heights of the generators.
    pub generator_heights: Vec<Vec<Q>>,
    pub adjacency: Vec<Vec<usize>>,
    index: HashMap<Elem, usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn add(a: &[Q], b: &[Q], sign: bool) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| if sign { x - y } else { x + y }).collect()
}

pub fn build_ball(model: &Model, radius: usize, cap: usize) -> Result<Ball, ProbeError> {
    let hb = HomBasis::new(&model.presentation());
    let n = model.num_generators();
    let generator_heights: Vec<Vec<Q>> = (0..n).map(|g| hb.generator_height(g)).collect();
    let id = model.identity();
    let mut ball = Ball {
        radius,
        vertices: vec![id.clone()],
        distance: vec![0],
        heights: vec![vec![Q::from_integer(0.into()); hb.dim()]],
        generator_heights,
        adjacency: vec![Vec::new()],
        index: HashMap::from([(id, 0)]),
    };
    let mut head = 0;
    while head < ball.vertices.len() {
        let d = ball.distance[head];
        if d < radius {
            for g in 0..n {
                for inverse in [false, true] {
                    let next = model.act(&ball.vertices[head], g, inverse);
                    if ball.index.contains_key(&next) {
                        continue;
                    }
                    if ball.vertices.len() >= cap {
                        return Err(ProbeError::BallTooLarge(cap));
                    }
                    let h = add(&ball.heights[head], &ball.generator_heights[g], inverse);
                    ball.index.insert(next.clone(), ball.vertices.len());
                    ball.vertices.push(next);
                    ball.distance.push(d + 1);
                    ball.heights.push(h);
                    ball.adjacency.push(Vec::new());
                }
            }
        }
        head += 1;
    }
    for v in 0..ball.vertices.len() {
        for g in 0..n {
            let u = model.act(&ball.vertices[v], g, false);
            if let Some(&u) = ball.index.get(&u) {
                ball.adjacency[v].push(u);
                ball.adjacency[u].push(v);
            }
        }
    }
    Ok(ball)
}
