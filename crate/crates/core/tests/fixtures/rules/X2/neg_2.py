import tensorflow as tf
model = tf.keras.Sequential([tf.keras.layers.Dense(1)])
es = tf.keras.callbacks.EarlyStopping(monitor="val_loss")
cbs = [es]
model.fit(X, y, callbacks=cbs)
