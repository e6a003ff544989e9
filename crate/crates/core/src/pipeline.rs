//! Stage orchestration and caching (stub while lower layers are built).
