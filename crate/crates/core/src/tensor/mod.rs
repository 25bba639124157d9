//! Dense f64 tensors with reverse-mode differentiation.
//!
//! The computation record is a DAG of reference-counted nodes built as ops
//! execute. Calling [`Tensor::backward`] on a scalar walks the record in
//! reverse topological order and accumulates gradients into every
//! gradient-enabled leaf. The record is single-threaded by construction
//! (`Rc`); tensors that do not participate in differentiation are plain
//! immutable buffers.
//!
//! Only what the generator/discriminator stacks need is implemented:
//! matmul, broadcasting adds, elementwise nonlinearities, reductions,
//! concatenation and row softmax. Everything is f64 so finite-difference
//! checks stay tight.

use std::cell::RefCell;
use std::collections::HashSet;
use std::rc::Rc;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub mod checkpoint;
pub mod gradcheck;
pub mod losses;
pub mod ops;
pub mod optim;

static NEXT_ID: AtomicUsize = AtomicUsize::new(0);

/// Backward rule: given the output gradient and the parent tensors,
/// produce one gradient buffer per parent (None where not needed).
type BackwardFn = Box<dyn Fn(&[f64], &[Tensor]) -> Vec<Option<Vec<f64>>>>;

pub(crate) struct Inner {
    id: usize,
    shape: Vec<usize>,
    data: Vec<f64>,
    grad: RefCell<Option<Vec<f64>>>,
    requires_grad: bool,
    parents: Vec<Tensor>,
    backward: Option<BackwardFn>,
}

/// Dense row-major f64 tensor, cheaply clonable (shared buffer).
#[derive(Clone)]
pub struct Tensor {
    inner: Rc<Inner>,
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tensor")
            .field("shape", &self.inner.shape)
            .field("requires_grad", &self.inner.requires_grad)
            .field("data", &self.inner.data)
            .finish()
    }
}

fn check_shape(shape: &[usize], data_len: usize) -> Result<()> {
    let expected: usize = shape.iter().product();
    if shape.is_empty() || shape.iter().any(|d| *d == 0) {
        return Err(Error::Domain(format!(
            "tensor shape must be non-empty with positive dims, got {shape:?}"
        )));
    }
    if expected != data_len {
        return Err(Error::Domain(format!(
            "tensor data length {data_len} does not match shape {shape:?}"
        )));
    }
    Ok(())
}

impl Tensor {
    fn build(
        shape: Vec<usize>,
        data: Vec<f64>,
        requires_grad: bool,
        parents: Vec<Tensor>,
        backward: Option<BackwardFn>,
    ) -> Tensor {
        Tensor {
            inner: Rc::new(Inner {
                id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
                shape,
                data,
                grad: RefCell::new(None),
                requires_grad,
                parents,
                backward,
            }),
        }
    }

    /// Leaf tensor outside the differentiation record.
    pub fn from_vec(shape: &[usize], data: Vec<f64>) -> Result<Tensor> {
        check_shape(shape, data.len())?;
        Ok(Tensor::build(shape.to_vec(), data, false, Vec::new(), None))
    }

    /// Gradient-enabled leaf (a trainable parameter or probed input).
    pub fn leaf_with_grad(shape: &[usize], data: Vec<f64>) -> Result<Tensor> {
        check_shape(shape, data.len())?;
        Ok(Tensor::build(shape.to_vec(), data, true, Vec::new(), None))
    }

    pub fn zeros(shape: &[usize]) -> Result<Tensor> {
        let len = shape.iter().product();
        Tensor::from_vec(shape, vec![0.0; len])
    }

    pub fn scalar(value: f64) -> Tensor {
        Tensor::from_vec(&[1], vec![value]).expect("scalar shape is valid")
    }

    /// Internal constructor for op outputs. When no parent participates in
    /// differentiation the record is dropped so pure evaluation stays lean.
    pub(crate) fn from_op(
        shape: Vec<usize>,
        data: Vec<f64>,
        parents: Vec<Tensor>,
        backward: BackwardFn,
    ) -> Tensor {
        let requires_grad = parents.iter().any(|p| p.inner.requires_grad);
        if requires_grad {
            Tensor::build(shape, data, true, parents, Some(backward))
        } else {
            Tensor::build(shape, data, false, Vec::new(), None)
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.inner.shape
    }

    pub fn len(&self) -> usize {
        self.inner.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.inner.data
    }

    /// Value of a single-element tensor.
    pub fn item(&self) -> Result<f64> {
        if self.len() != 1 {
            return Err(Error::Domain(format!(
                "item() requires a single-element tensor, shape is {:?}",
                self.shape()
            )));
        }
        Ok(self.inner.data[0])
    }

    pub fn requires_grad(&self) -> bool {
        self.inner.requires_grad
    }

    pub fn grad(&self) -> Option<Vec<f64>> {
        self.inner.grad.borrow().clone()
    }

    pub fn zero_grad(&self) {
        *self.inner.grad.borrow_mut() = None;
    }

    /// Copy of the values detached from the differentiation record.
    pub fn detach(&self) -> Tensor {
        Tensor::build(
            self.inner.shape.clone(),
            self.inner.data.clone(),
            false,
            Vec::new(),
            None,
        )
    }

    fn accumulate_grad(&self, g: &[f64]) {
        let mut slot = self.inner.grad.borrow_mut();
        match slot.as_mut() {
            Some(acc) => {
                for (a, b) in acc.iter_mut().zip(g) {
                    *a += b;
                }
            }
            None => *slot = Some(g.to_vec()),
        }
    }

    /// Reverse-mode pass from a scalar. Gradients accumulate into every
    /// gradient-enabled tensor reachable through the record; call
    /// [`Tensor::zero_grad`] (or step an optimizer) before reusing leaves.
    pub fn backward(&self) -> Result<()> {
        if self.len() != 1 {
            return Err(Error::Domain(format!(
                "backward requires a scalar loss, shape is {:?}",
                self.shape()
            )));
        }
        if !self.inner.requires_grad {
            return Err(Error::Domain(
                "backward on a tensor outside the differentiation record".into(),
            ));
        }

        // Iterative post-order DFS for a reverse topological order.
        let mut order: Vec<Tensor> = Vec::new();
        let mut visited: HashSet<usize> = HashSet::new();
        let mut stack: Vec<(Tensor, bool)> = vec![(self.clone(), false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
                continue;
            }
            if !node.inner.requires_grad || !visited.insert(node.inner.id) {
                continue;
            }
            stack.push((node.clone(), true));
            for p in &node.inner.parents {
                stack.push((p.clone(), false));
            }
        }

        self.accumulate_grad(&[1.0]);
        for node in order.iter().rev() {
            let Some(backward) = &node.inner.backward else {
                continue;
            };
            let grad = node.inner.grad.borrow().clone();
            let Some(grad) = grad else { continue };
            let parent_grads = backward(&grad, &node.inner.parents);
            debug_assert_eq!(parent_grads.len(), node.inner.parents.len());
            for (parent, pg) in node.inner.parents.iter().zip(parent_grads) {
                if let Some(pg) = pg {
                    if parent.inner.requires_grad {
                        debug_assert_eq!(pg.len(), parent.len());
                        parent.accumulate_grad(&pg);
                    }
                }
            }
            // Intermediate grads are not consumed again; free them.
            if node.inner.backward.is_some() && !Rc::ptr_eq(&node.inner, &self.inner) {
                *node.inner.grad.borrow_mut() = None;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_validates_length() {
        assert!(Tensor::from_vec(&[2, 3], vec![0.0; 6]).is_ok());
        assert!(Tensor::from_vec(&[2, 3], vec![0.0; 5]).is_err());
        assert!(Tensor::from_vec(&[0], vec![]).is_err());
    }

    #[test]
    fn backward_rejects_non_scalars() {
        let t = Tensor::leaf_with_grad(&[2], vec![1.0, 2.0]).unwrap();
        assert!(t.backward().is_err());
    }

    #[test]
    fn detach_cuts_the_record() {
        let a = Tensor::leaf_with_grad(&[1], vec![3.0]).unwrap();
        let b = a.scale(2.0).detach();
        assert!(!b.requires_grad());
        let c = b.scale(5.0);
        assert!(!c.requires_grad());
    }

    #[test]
    fn grad_accumulates_across_backward_calls() {
        let a = Tensor::leaf_with_grad(&[1], vec![2.0]).unwrap();
        let loss = a.scale(3.0);
        loss.backward().unwrap();
        let loss2 = a.scale(3.0);
        loss2.backward().unwrap();
        assert_eq!(a.grad().unwrap(), vec![6.0]);
        a.zero_grad();
        assert!(a.grad().is_none());
    }

    #[test]
    fn shared_subexpression_gradients_sum() {
        // loss = x*x -> dloss/dx = 2x
        let x = Tensor::leaf_with_grad(&[1], vec![3.0]).unwrap();
        let loss = x.mul(&x).unwrap();
        loss.backward().unwrap();
        assert_eq!(x.grad().unwrap(), vec![6.0]);
    }
}
