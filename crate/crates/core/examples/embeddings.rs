//! Embedding similarity through the cached store, using the deterministic
//! stub encoder; point `HttpEncoder` at a model server for real vectors.
//!
//!     cargo run --example embeddings

use facmatch::scoring::{EmbeddingCache, EmbeddingStore, StubEncoder};

fn main() {
    let cache_dir = std::env::temp_dir().join("facmatch-embedding-example");
    let store = EmbeddingStore::new(Box::new(StubEncoder::new(42)), Some(EmbeddingCache::new(&cache_dir)));
    let pairs = [
        ("Hubble Space Telescope", "HST Hubble telescope"),
        ("Voyager 1", "Voyager 2"),
        ("La Silla Observatory", "Cassini orbiter"),
    ];
    for (a, b) in pairs {
        let s = store.similarity(a, b).expect("stub encoder never fails");
        println!("{:.3}  {a:?} / {b:?}", s);
    }
    // a store with no encoder answers from the cache alone
    let offline = EmbeddingStore::offline(store.model_id(), EmbeddingCache::new(&cache_dir));
    let s = offline.similarity("Voyager 1", "Voyager 2").expect("both cached");
    println!("offline, from {}: {s:.3}", cache_dir.display());
}
