from django.urls import path
from . import views

urlpatterns = [
    path('runs/', views.run_list, name='run_list'),
    path('runs/<int:pk>/', views.run_status, name='run_status'),
    path('runs/<int:pk>/conditions/', views.run_conditions, name='run_conditions'),
]
