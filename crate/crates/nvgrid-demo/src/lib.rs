//! Interactive browser demo for 2V: draw the reduced grid diagram of a
//! seeded random element, compose elements, and trace points through the
//! bijection.  Build with `wasm-pack build --target web` and open
//! `static/index.html`; the scene model also compiles and tests natively.

pub mod scene;

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    use crate::scene;
    use nvgrid::Element;

    fn json<T: serde::Serialize>(value: &T) -> String {
        serde_json::to_string(value).expect("scene serializes")
    }

    /// Canonical scene of the seeded random element.
    #[wasm_bindgen]
    pub fn scene_random(seed: u32, budget: u32) -> String {
        let f = scene::random_element(seed as u64, budget as usize);
        json(&scene::scene_of(&f))
    }

    /// Scene of the composition of two seeded elements (left acts first).
    #[wasm_bindgen]
    pub fn scene_compose(seed_a: u32, budget_a: u32, seed_b: u32, budget_b: u32) -> String {
        let f = scene::random_element(seed_a as u64, budget_a as usize);
        let g = scene::random_element(seed_b as u64, budget_b as usize);
        let fg = f.compose(&g).expect("equal dimensions");
        json(&scene::scene_of(&fg))
    }

    /// Scene of the inverse of the seeded element.
    #[wasm_bindgen]
    pub fn scene_invert(seed: u32, budget: u32) -> String {
        let f = scene::random_element(seed as u64, budget as usize);
        json(&scene::scene_of(&f.invert()))
    }

    /// Map a clicked point through the seeded element.
    #[wasm_bindgen]
    pub fn map_point(seed: u32, budget: u32, x: f64, y: f64) -> String {
        let f = scene::random_element(seed as u64, budget as usize);
        json(&scene::map_point(&f, x, y))
    }

    /// Map a clicked point through the inverse of the seeded element.
    #[wasm_bindgen]
    pub fn map_point_inverse(seed: u32, budget: u32, x: f64, y: f64) -> String {
        let f = scene::random_element(seed as u64, budget as usize);
        json(&scene::map_point(&f.invert(), x, y))
    }

    /// Map a clicked point through the composition.
    #[wasm_bindgen]
    pub fn map_point_composed(
        seed_a: u32,
        budget_a: u32,
        seed_b: u32,
        budget_b: u32,
        x: f64,
        y: f64,
    ) -> String {
        let f = scene::random_element(seed_a as u64, budget_a as usize);
        let g = scene::random_element(seed_b as u64, budget_b as usize);
        let fg: Element = f.compose(&g).expect("equal dimensions");
        json(&scene::map_point(&fg, x, y))
    }
}
